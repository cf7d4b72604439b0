//! The `ovgadget` command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails or a diameter is
//! infinite, 2 on usage, input or parse errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::congest::{
    default_bandwidth, exact_diameter_program, lower_bound_budget, run, two_party_simulate,
    CongestError, DiameterOutput, NetworkConfig,
};
use crate::gadget::{build_gadget, cut_partition, GadgetError, GadgetGraph, GadgetParams, Side};
use crate::generate::{ov_multisets, random_disjointness, random_ov, seeded_rng, Force};
use crate::graph::Graph;
use crate::metrics::{
    classify, diameter, verify_all, verify_cut, verify_distance_lemmas_on, verify_theorem2_on,
    MetricsError, Verdict, VerificationReport,
};
use crate::ov::{encode_disjointness, encoded_dimension, DisjointnessInstance, OvInstance};

#[derive(Debug, Parser)]
#[command(
    name = "ovgadget",
    version,
    about = "Hard diameter instances from set disjointness and orthogonal vectors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Encode a disjointness instance as an orthogonal vectors instance.
    Encode(EncodeArgs),
    /// Build the gadget graph and write it out.
    Gadget(GadgetArgs),
    /// Compute the exact diameter of a gadget or of an edge-list graph.
    Diameter(DiameterArgs),
    /// Check the diameter dichotomy, the distance bounds and the cut.
    Verify(VerifyArgs),
    /// Run the distributed diameter program split across the cut.
    Simulate(SimulateArgs),
    /// Verify every instance of a parameter grid.
    Sweep(SweepArgs),
}

/// Where the instance comes from. With `--input`, a file whose header has
/// one field is a disjointness instance (encoded before use) and one with
/// two fields is an OV instance. Otherwise an instance is drawn at random:
/// an OV instance if `--d` is given, else a disjointness instance over `[n]`.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub d: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Force the answer of a random instance.
    #[arg(long, value_enum, default_value_t = Force::Any)]
    pub force: Force,
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, default_value_t = 1)]
    pub ell: usize,
    #[arg(long, default_value_t = 0)]
    pub p: usize,
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    /// Treat `--ell` as the target gap and derive `(ell', p)` from it.
    #[arg(long, conflicts_with = "p")]
    pub auto_ell: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Edgelist,
    Json,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GadgetArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value_t = Format::Edgelist)]
    pub format: Format,
    /// Output file. An edge list is accompanied by `<out>.labels`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DiameterArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Edge-list graph to use instead of a gadget.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// JSON summary file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Delete one edge of the first left `u -- v` path (or of `v -- x` when
    /// that path is empty) before verifying.
    #[arg(long)]
    pub negative_control: bool,
    /// JSON report file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Bits per edge per direction per round; defaults to `ceil(log2(N + 1)) + 2`.
    #[arg(long)]
    pub bandwidth: Option<usize>,
    /// Edge-list graph to run the diameter program on, without a cut.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// JSON report file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2])]
    pub ell: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0, 1])]
    pub p: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0, 1, 2])]
    pub q: Vec<usize>,
    /// Treat each `--ell` as a target gap; `--p` is then ignored.
    #[arg(long)]
    pub auto_ell: bool,
    /// Every instance with `n <= max-n` and `d <= max-d`, sides sorted.
    #[arg(long, default_value_t = 3)]
    pub max_n: usize,
    #[arg(long, default_value_t = 3)]
    pub max_d: usize,
    /// Random OV instances to add, `n` cycling through `1..=random-n` at
    /// the encoder dimension.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    #[arg(long, default_value_t = 8)]
    pub random_n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// JSON report file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl From<GadgetError> for CliError {
    fn from(e: GadgetError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        match e {
            MetricsError::Gadget(g) => g.into(),
            other => CliError::Failure(other.to_string()),
        }
    }
}

impl From<CongestError> for CliError {
    fn from(e: CongestError) -> Self {
        match e {
            CongestError::Config(_) => CliError::Usage(e.to_string()),
            other => CliError::Failure(other.to_string()),
        }
    }
}

type CliResult = Result<i32, CliError>;

/// Parses `args` and runs the command, writing to `out` and `err`.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Encode(a) => cmd_encode(&a, out, err),
        Command::Gadget(a) => cmd_gadget(&a, out),
        Command::Diameter(a) => cmd_diameter(&a, out),
        Command::Verify(a) => cmd_verify(&a, out),
        Command::Simulate(a) => cmd_simulate(&a, out),
        Command::Sweep(a) => cmd_sweep(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Failure(format!("cannot write output: {e}")))
}

fn input_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Usage(format!("{}: {e}", path.display()))
}

/// The OV instance to build on, and the disjointness instance it encodes
/// if there is one.
struct Loaded {
    ov: OvInstance,
    disjointness: Option<DisjointnessInstance>,
}

impl Loaded {
    /// Size of the two-party input behind the instance.
    fn input_bits(&self) -> usize {
        self.disjointness.as_ref().map_or(self.ov.n(), |d| d.n())
    }
}

fn header_fields(text: &str) -> usize {
    text.lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .map_or(0, |l| l.split_whitespace().count())
}

fn load(source: &SourceArgs) -> Result<Loaded, CliError> {
    if let Some(path) = &source.input {
        let text = read(path)?;
        if header_fields(&text) == 1 {
            let inst = DisjointnessInstance::from_text(&text).map_err(|e| input_error(path, e))?;
            return Ok(Loaded {
                ov: encode_disjointness(&inst),
                disjointness: Some(inst),
            });
        }
        let ov = OvInstance::from_text(&text).map_err(|e| input_error(path, e))?;
        return Ok(Loaded {
            ov,
            disjointness: None,
        });
    }
    let n = source
        .n
        .ok_or_else(|| CliError::Usage("give --input or --n".into()))?;
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let mut rng = seeded_rng(source.seed);
    match source.d {
        Some(0) => Err(CliError::Usage("--d must be at least 1".into())),
        Some(d) => Ok(Loaded {
            ov: random_ov(n, d, source.force, &mut rng),
            disjointness: None,
        }),
        None => {
            let inst = random_disjointness(n, source.force, &mut rng);
            Ok(Loaded {
                ov: encode_disjointness(&inst),
                disjointness: Some(inst),
            })
        }
    }
}

fn params_of(args: &ParamArgs) -> Result<GadgetParams, CliError> {
    Ok(if args.auto_ell {
        GadgetParams::for_target_ell(args.ell, args.q)?
    } else {
        GadgetParams::new(args.ell, args.p, args.q)?
    })
}

fn params_line(params: GadgetParams) -> String {
    format!(
        "ell' {} p {} q {}: diameter {} with a pair, {} without",
        params.ell(),
        params.p(),
        params.q(),
        params.pair_diameter(),
        params.no_pair_diameter()
    )
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::HasPair => "HasPair",
        Verdict::NoPair => "NoPair",
        Verdict::Inconsistent => "Inconsistent",
    }
}

fn oracle_verdict(ov: &OvInstance) -> Verdict {
    if ov.has_orthogonal_pair().is_some() {
        Verdict::HasPair
    } else {
        Verdict::NoPair
    }
}

fn cmd_encode(args: &EncodeArgs, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    if args.source.d.is_some() {
        return Err(CliError::Usage(
            "encode takes a disjointness instance; --d is derived".into(),
        ));
    }
    let loaded = load(&args.source)?;
    let Some(inst) = &loaded.disjointness else {
        return Err(CliError::Usage(
            "encode needs a disjointness instance (header: n)".into(),
        ));
    };
    let d = encoded_dimension(inst.n());
    let text = loaded.ov.to_text();
    match &args.out {
        Some(path) => {
            write_file(path, &text)?;
            emit(out, &format!("d = {d}\n"))?;
        }
        None => {
            emit(out, &text)?;
            let _ = writeln!(err, "d = {d}");
        }
    }
    Ok(0)
}

fn cmd_gadget(args: &GadgetArgs, out: &mut dyn Write) -> CliResult {
    let loaded = load(&args.source)?;
    let params = params_of(&args.params)?;
    let g = build_gadget(&loaded.ov, params);
    let summary = format!(
        "gadget n {} d {}: {} vertices, {} edges; {}\n",
        loaded.ov.n(),
        loaded.ov.dimension(),
        g.vertex_count(),
        g.edge_count(),
        params_line(params)
    );
    match (args.format, &args.out) {
        (Format::Edgelist, Some(path)) => {
            write_file(path, &g.to_edge_list())?;
            let mut labels = path.clone().into_os_string();
            labels.push(".labels");
            write_file(Path::new(&labels), &g.labels_text())?;
            emit(out, &summary)?;
        }
        (Format::Json, Some(path)) => {
            write_file(path, &g.to_json())?;
            emit(out, &summary)?;
        }
        (Format::Edgelist, None) => emit(out, &g.to_edge_list())?,
        (Format::Json, None) => emit(out, &g.to_json())?,
    }
    Ok(0)
}

fn infinite(e: MetricsError) -> CliError {
    match e {
        MetricsError::Disconnected {
            source_vertex,
            target,
        } => CliError::Failure(format!(
            "diameter is infinite: vertex {} cannot reach vertex {}",
            source_vertex + 1,
            target + 1
        )),
        other => other.into(),
    }
}

fn read_graph(path: &Path) -> Result<Graph, CliError> {
    Graph::from_edge_list(&read(path)?).map_err(|e| input_error(path, e))
}

fn cmd_diameter(args: &DiameterArgs, out: &mut dyn Write) -> CliResult {
    if let Some(path) = &args.graph {
        let g = read_graph(path)?;
        let d = diameter(&g).map_err(infinite)?;
        emit(
            out,
            &format!(
                "diameter {} between {} and {}\n",
                d.value,
                d.witness.0 + 1,
                d.witness.1 + 1
            ),
        )?;
        if let Some(path) = &args.out {
            let doc = json!({ "vertices": g.vertex_count(), "edges": g.edge_count(), "diameter": d.value, "witness": [d.witness.0 + 1, d.witness.1 + 1] });
            write_file(path, &format!("{doc:#}\n"))?;
        }
        return Ok(0);
    }
    let loaded = load(&args.source)?;
    let params = params_of(&args.params)?;
    let g = build_gadget(&loaded.ov, params);
    let d = diameter(g.graph()).map_err(infinite)?;
    let verdict = classify(d.value as u64, params);
    let oracle = oracle_verdict(&loaded.ov);
    let mut text = format!("{}\n", params_line(params));
    text.push_str(&format!(
        "diameter {} between {} and {}\n",
        d.value,
        d.witness.0 + 1,
        d.witness.1 + 1
    ));
    text.push_str(&format!(
        "verdict {} (brute force: {})\n",
        verdict_name(verdict),
        verdict_name(oracle)
    ));
    emit(out, &text)?;
    if let Some(path) = &args.out {
        let doc = json!({
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "params": params,
            "diameter": d.value,
            "witness": [d.witness.0 + 1, d.witness.1 + 1],
            "verdict": verdict_name(verdict),
            "oracle": verdict_name(oracle),
        });
        write_file(path, &format!("{doc:#}\n"))?;
    }
    Ok(if verdict == Verdict::Inconsistent || verdict != oracle {
        1
    } else {
        0
    })
}

/// The edge a negative control deletes: the first edge of `u_1^L -- v_1^L`,
/// or of `v_1^L -- x^L` when the former has length zero.
fn control_edge(g: &GadgetGraph) -> (usize, usize) {
    use crate::gadget::PathKind;
    let kind = if g.params().ell() == g.params().p() {
        PathKind::VToX {
            side: Side::Left,
            i: 0,
        }
    } else {
        PathKind::UToV {
            side: Side::Left,
            i: 0,
        }
    };
    let path = g.path(kind).expect("first vector's paths exist");
    (path.vertices[0], path.vertices[1])
}

fn gadget_report(g: &GadgetGraph, ov: &OvInstance) -> Result<VerificationReport, CliError> {
    let mut report = verify_theorem2_on(g, ov)?.merge(verify_distance_lemmas_on(g)?);
    if g.params().q() >= 1 {
        report = report.merge(verify_cut(g)?);
    }
    Ok(report)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult {
    let loaded = load(&args.source)?;
    let params = params_of(&args.params)?;
    let mut g = build_gadget(&loaded.ov, params);
    let mut removed = None;
    if args.negative_control {
        let (a, b) = control_edge(&g);
        g = g.with_edge_removed(a, b);
        removed = Some((a + 1, b + 1));
    }
    let report = gadget_report(&g, &loaded.ov)?;
    let measured = report.check("diameter").and_then(|c| c.actual);
    let verdict = measured.map_or(Verdict::Inconsistent, |d| classify(d, params));
    let mut text = format!("{}\n", params_line(params));
    if let Some((a, b)) = removed {
        text.push_str(&format!("negative control: removed edge {a}-{b}\n"));
    }
    text.push_str(&report.to_text());
    match measured {
        _ if verdict != Verdict::Inconsistent => {
            text.push_str(&format!("verdict {}\n", verdict_name(verdict)))
        }
        Some(d) => text.push_str(&format!(
            "verdict Inconsistent: diameter {d} is neither {} nor {}\n",
            params.pair_diameter(),
            params.no_pair_diameter()
        )),
        None => text.push_str("verdict Inconsistent: diameter is infinite\n"),
    }
    emit(out, &text)?;
    if let Some(path) = &args.out {
        let mut doc = serde_json::to_value(&report).expect("report serialises");
        doc["params"] = json!(params);
        doc["verdict"] = json!(verdict_name(verdict));
        doc["negative_control"] = json!(removed);
        write_file(path, &format!("{doc:#}\n"))?;
    }
    Ok(if report.passed { 0 } else { 1 })
}

fn cmd_simulate(args: &SimulateArgs, out: &mut dyn Write) -> CliResult {
    if let Some(path) = &args.graph {
        let g = read_graph(path)?;
        let n = g.vertex_count();
        let b = args.bandwidth.unwrap_or_else(|| default_bandwidth(n));
        let program = exact_diameter_program(n, b)?;
        let trace = run(&NetworkConfig::new(g, b)?, &program)?;
        let value = match trace.outputs.first() {
            Some(Some(DiameterOutput::Finite(v))) if trace.completed => *v,
            _ => {
                return Err(CliError::Failure(
                    "diameter is infinite: the graph is disconnected".into(),
                ))
            }
        };
        emit(
            out,
            &format!(
                "diameter {value} after {} rounds, {} bits sent\n",
                trace.rounds,
                trace.total_bits()
            ),
        )?;
        if let Some(path) = &args.out {
            write_file(path, &format!("{:#}\n", trace.to_json_value()))?;
        }
        return Ok(0);
    }
    let loaded = load(&args.source)?;
    let params = params_of(&args.params)?;
    if params.q() == 0 {
        return Err(GadgetError::CutNeedsBridge.into());
    }
    let g = build_gadget(&loaded.ov, params);
    let cut = cut_partition(&g)?;
    let vertices = g.vertex_count();
    let b = args
        .bandwidth
        .unwrap_or_else(|| default_bandwidth(vertices));
    let config = NetworkConfig::new(g.graph().clone(), b)?;
    let program = exact_diameter_program(vertices, b)?;
    let split = two_party_simulate(&config, &cut, &program)?;
    let whole = run(&config, &program)?;
    let faithful = split.outputs == whole.outputs;
    let oracle = diameter(g.graph()).map_err(infinite)?.value;
    let computed = match split.outputs.first() {
        Some(Some(DiameterOutput::Finite(v))) => Some(*v),
        _ => None,
    };
    let verdict = computed.map_or(Verdict::Inconsistent, |v| classify(v as u64, params));
    let brute = oracle_verdict(&loaded.ov);
    let ledger = &split.ledger;
    let (_, d) = g.source_dims();
    let n_bits = loaded.input_bits() as u64;
    let budget = lower_bound_budget(n_bits, ledger.cut_size as u64, b as u64);
    let ok = faithful
        && split.completed
        && computed == Some(oracle)
        && verdict == brute
        && ledger.is_consistent()
        && ledger.max_round_bits() <= 2 * (d as u64 + 1) * b as u64;

    let mut text = format!("{}\n", params_line(params));
    text.push_str(&format!(
        "gadget {vertices} vertices, {} edges, cut {} edges, bandwidth {b} bits\n",
        g.edge_count(),
        ledger.cut_size
    ));
    text.push_str(&format!(
        "rounds {} (N^2 + 2N = {})\n",
        ledger.rounds_used,
        vertices * vertices + 2 * vertices
    ));
    text.push_str(&format!(
        "cut bits A->B {} B->A {} total {}\n",
        ledger.bits_a_to_b,
        ledger.bits_b_to_a,
        ledger.total_bits()
    ));
    text.push_str(&format!(
        "max per-round cut bits {} of capacity 2(d+1)B = {}\n",
        ledger.max_round_bits(),
        ledger.capacity_per_round()
    ));
    let shown = computed.map_or_else(|| "none".to_string(), |v| v.to_string());
    text.push_str(&format!(
        "diameter {shown} (BFS {oracle}), verdict {} (brute force: {})\n",
        verdict_name(verdict),
        verdict_name(brute)
    ));
    text.push_str(&format!("faithful to the unsplit run: {faithful}\n"));
    text.push_str(&format!(
        "lower bound budget for {n_bits} input bits: {budget} rounds\n"
    ));
    emit(out, &text)?;
    if let Some(path) = &args.out {
        let doc = json!({
            "params": params,
            "vertices": vertices,
            "edges": g.edge_count(),
            "ledger": ledger.to_json_value(),
            "completed": split.completed,
            "diameter": computed,
            "bfs_diameter": oracle,
            "verdict": verdict_name(verdict),
            "oracle": verdict_name(brute),
            "faithful": faithful,
            "input_bits": n_bits,
            "lower_bound_rounds": budget,
        });
        write_file(path, &format!("{doc:#}\n"))?;
    }
    Ok(if ok { 0 } else { 1 })
}

fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write) -> CliResult {
    let mut grid = Vec::new();
    for &ell in &args.ell {
        if args.auto_ell {
            for &q in &args.q {
                grid.push(GadgetParams::for_target_ell(ell, q)?);
            }
        } else {
            for &p in &args.p {
                for &q in &args.q {
                    grid.push(GadgetParams::new(ell, p, q)?);
                }
            }
        }
    }
    let mut instances = Vec::new();
    for n in 1..=args.max_n {
        for d in 1..=args.max_d {
            instances.extend(ov_multisets(n, d));
        }
    }
    let mut rng = seeded_rng(args.seed);
    for i in 0..args.random {
        let n = i % args.random_n.max(1) + 1;
        instances.push(random_ov(n, encoded_dimension(n), Force::Any, &mut rng));
    }
    if instances.is_empty() {
        return Err(CliError::Usage("the sweep has no instances".into()));
    }

    let mut text = String::new();
    let mut cells = Vec::new();
    let mut all_ok = true;
    for params in grid {
        let (mut failed, mut inconsistent, mut first) = (0usize, 0usize, None);
        for inst in &instances {
            let (g, mut report) = verify_all(inst, params)?;
            if params.q() >= 1 {
                report = report.merge(verify_cut(&g)?);
            }
            let d = report.check("diameter").and_then(|c| c.actual);
            if d.is_none_or(|d| classify(d, params) == Verdict::Inconsistent) {
                inconsistent += 1;
            }
            if !report.passed {
                failed += 1;
                if first.is_none() {
                    let names: Vec<_> = report.failures().map(|c| c.name.clone()).collect();
                    first = Some(format!(
                        "{} [{}]",
                        inst.to_text().replace('\n', " ").trim(),
                        names.join(", ")
                    ));
                }
            }
        }
        all_ok &= failed == 0;
        text.push_str(&format!(
            "{} ell' {} p {} q {}: {} instances, {failed} failed, {inconsistent} inconsistent\n",
            if failed == 0 { "PASS" } else { "FAIL" },
            params.ell(),
            params.p(),
            params.q(),
            instances.len()
        ));
        if let Some(f) = &first {
            text.push_str(&format!("  first failure: {f}\n"));
        }
        cells.push(json!({ "params": params, "instances": instances.len(), "failed": failed, "inconsistent": inconsistent, "first_failure": first }));
    }
    text.push_str(if all_ok {
        "sweep PASSED\n"
    } else {
        "sweep FAILED\n"
    });
    emit(out, &text)?;
    if let Some(path) = &args.out {
        write_file(
            path,
            &format!("{:#}\n", json!({ "passed": all_ok, "cells": cells })),
        )?;
    }
    Ok(if all_ok { 0 } else { 1 })
}
