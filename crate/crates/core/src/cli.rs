//! The `cohbundle` command line.
//!
//! Every command prints one JSON document. Exit codes: 0 when all checks
//! pass, 1 on a verification mismatch, 2 on input or usage errors.

mod workspace;

pub use workspace::{builtin_group, CheckSpec, Settings, Workspace, WorkspaceError, CHECK_KINDS};

use std::io::Read as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::alg::{
    block_decomposition, block_space, crossed_product, group_algebra, twisted_group_algebra, verify_lem_pointwise,
    verify_prop_decom, verify_prop_decom1, verify_structure_theorem, AlgError, FiberSummary, NumericSettings,
    StructureInput,
};
use crate::bundle::{self, build_zu, bundle_product, psi_iso_checked, trivialization};
use crate::coh::{self, Cochain};
use crate::ext::{self, RepresentationGroup};
use crate::grp::{self, FiniteGroup};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

pub const REPORT_VERSION: u32 = 1;

#[derive(Parser, Debug)]
#[command(name = "cohbundle", version, about = "Cohomology, torsor bundles and twisted group algebras of finite groups")]
pub struct Cli {
    /// Workspace JSON file, or `-` for stdin.
    #[arg(long, global = true)]
    pub workspace: Option<String>,
    /// Seed for the numerical block decomposition.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Relative eigenvalue clustering tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Largest group order accepted from input.
    #[arg(long, global = true, default_value_t = 512)]
    pub max_order: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Group structure summary.
    Group {
        #[command(subcommand)]
        cmd: GroupCmd,
    },
    /// Cohomology computations.
    Coh {
        #[command(subcommand)]
        cmd: CohCmd,
    },
    /// Central extensions.
    Ext {
        #[command(subcommand)]
        cmd: ExtCmd,
    },
    /// Torsor bundles.
    Bundle {
        #[command(subcommand)]
        cmd: BundleCmd,
    },
    /// Twisted group algebras and their block structure.
    Alg {
        #[command(subcommand)]
        cmd: AlgCmd,
    },
    /// Run the checks listed in the workspace.
    Verify(VerifyArgs),
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    Info {
        #[arg(long)]
        group: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum CohCmd {
    /// `H^2(G, Z_M)` or `H^2(G, T)`.
    H2 {
        #[arg(long)]
        group: String,
        #[arg(long, conflicts_with = "circle", required_unless_present = "circle")]
        modulus: Option<u64>,
        #[arg(long)]
        circle: bool,
    },
    /// Classes of a cochain at each base point, via a representation group.
    Classify {
        #[arg(long)]
        cochain: String,
        #[arg(long)]
        repgroup: String,
    },
    /// `u = dg + inf(v) + u_phi`.
    Decompose {
        #[arg(long)]
        cochain: String,
        #[arg(long)]
        repgroup: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ExtCmd {
    /// Structure of an extension and its pointwise triviality.
    Build {
        #[arg(long)]
        extension: String,
    },
    /// Transgression `N^ -> H^2(G, T)`.
    Transgress {
        #[arg(long)]
        extension: String,
    },
    /// The extension `L'` built from `L` and a representation group.
    Prime {
        #[arg(long)]
        extension: String,
        #[arg(long)]
        repgroup: String,
    },
    /// Representation group data.
    Repgroup {
        #[arg(long)]
        repgroup: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum BundleCmd {
    /// The bundle of a pointwise trivial cocycle.
    Build {
        #[arg(long)]
        cochain: String,
    },
    /// Product of two bundles over the same base.
    Product {
        #[arg(long)]
        cochain: String,
        #[arg(long)]
        with: String,
    },
    /// `Z_eta -> E_ab^` for a pointwise trivial extension.
    Psi {
        #[arg(long)]
        extension: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum AlgCmd {
    /// Block profile of `C[G]` or of `C[G, omega]`.
    Profile {
        #[arg(long, conflicts_with = "cochain", required_unless_present = "cochain")]
        group: Option<String>,
        /// Degree-2 cocycle; one profile per base point.
        #[arg(long)]
        cochain: Option<String>,
    },
    /// Fiberwise summary of the crossed product of a cocycle.
    Fibers {
        #[arg(long)]
        cochain: String,
    },
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Check kind to run, or `all`.
    #[arg(value_parser = verify_kinds())]
    pub kind: String,
    /// Comma-separated check ids to restrict to.
    #[arg(long, value_delimiter = ',')]
    pub inputs: Vec<String>,
}

fn verify_kinds() -> clap::builder::PossibleValuesParser {
    let mut kinds: Vec<&'static str> = CHECK_KINDS.to_vec();
    kinds.push("all");
    clap::builder::PossibleValuesParser::new(kinds)
}

/// Failure of a single command, mapped to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Workspace(#[from] WorkspaceError),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Mismatch(_) => EXIT_MISMATCH,
            _ => EXIT_INPUT,
        }
    }

    fn to_json(&self) -> Value {
        match self {
            CliError::Workspace(e) => json!({"kind": e.kind(), "pointer": e.pointer(), "message": e.to_string()}),
            CliError::Input(m) => json!({"kind": "InputError", "message": m}),
            CliError::Mismatch(m) => json!({"kind": "Mismatch", "message": m}),
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

/// Parses `args` (including the program name), runs the command and returns
/// the rendered output and exit code. Nothing is written to stdout.
pub fn run<I, T>(args: I) -> (String, i32)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_INPUT,
            };
            return (e.render().to_string(), code);
        }
    };
    let ws = match load_workspace(cli.workspace.as_deref(), cli.max_order) {
        Ok(ws) => ws,
        Err(e) => return render_error(&e),
    };
    run_loaded(&cli, &ws)
}

/// Runs a parsed command against an already loaded workspace.
pub fn run_loaded(cli: &Cli, ws: &Workspace) -> (String, i32) {
    let settings = NumericSettings {
        seed: cli.seed.or(ws.settings.seed).unwrap_or(0),
        tol: cli.tol.or(ws.settings.tol).unwrap_or(NumericSettings::default().tol),
    };
    if !(settings.tol > 0.0 && settings.tol.is_finite()) {
        return render_error(&CliError::Input("--tol must be a positive number".into()));
    }
    let result = match &cli.command {
        Command::Group { cmd } => group_cmd(cmd, ws),
        Command::Coh { cmd } => coh_cmd(cmd, ws),
        Command::Ext { cmd } => ext_cmd(cmd, ws),
        Command::Bundle { cmd } => bundle_cmd(cmd, ws),
        Command::Alg { cmd } => alg_cmd(cmd, ws, &settings, cli.max_order),
        Command::Verify(args) => Ok(verify(args, ws, &settings)),
    };
    match result {
        Ok((value, code)) => (render(&value), code),
        Err(e) => render_error(&e),
    }
}

pub fn load_workspace(path: Option<&str>, max_order: usize) -> Result<Workspace, CliError> {
    let bytes = match path {
        None => return Ok(Workspace::empty()),
        Some("-") => {
            let mut buf = Vec::new();
            std::io::stdin().read_to_end(&mut buf).map_err(|e| WorkspaceError::Io(e.to_string()))?;
            buf
        }
        Some(p) => std::fs::read(p).map_err(|e| WorkspaceError::Io(format!("{p}: {e}")))?,
    };
    Ok(Workspace::from_bytes(&bytes, max_order)?)
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

fn render_error(e: &CliError) -> (String, i32) {
    (render(&json!({"report_version": REPORT_VERSION, "error": e.to_json()})), e.code())
}

type CmdResult = Result<(Value, i32), CliError>;

fn ok(v: Value) -> CmdResult {
    Ok((v, EXIT_PASS))
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report types serialize")
}

fn cochain_json(c: &Cochain) -> Value {
    json!({
        "degree": c.degree(),
        "base": c.base_size(),
        "modulus": c.modulus(),
        "values": c.values(),
    })
}

fn group_json(g: &FiniteGroup) -> Value {
    let ab = grp::abelianization(g);
    json!({
        "order": g.order(),
        "abelian": g.is_abelian(),
        "exponent": g.exponent(),
        "center_order": g.center().len(),
        "commutator_order": g.commutator_subgroup().len(),
        "abelianization": ab.structure.invariant_factors(),
    })
}

fn group_cmd(cmd: &GroupCmd, ws: &Workspace) -> CmdResult {
    match cmd {
        GroupCmd::Info { group } => {
            let g = ws.group(group, "--group")?;
            let mut v = group_json(&g);
            v["group"] = json!(group);
            ok(v)
        }
    }
}

fn coh_cmd(cmd: &CohCmd, ws: &Workspace) -> CmdResult {
    match cmd {
        CohCmd::H2 { group, modulus, circle } => {
            let g = ws.group(group, "--group")?;
            if *circle {
                let h = coh::h2_circle(&g).map_err(input_err)?;
                ok(json!({"group": group, "coefficients": "T", "invariants": h.invariants(), "order": h.order() as u64}))
            } else {
                let m = modulus.expect("clap enforces --modulus or --circle");
                let h = coh::h2_mod(&g, m).map_err(input_err)?;
                ok(json!({"group": group, "coefficients": format!("Z{m}"), "invariants": h.invariants(), "order": h.order() as u64}))
            }
        }
        CohCmd::Classify { cochain, repgroup } => {
            let u = ws.cochain(cochain, "--cochain")?;
            let r = ws.repgroup(repgroup, "--repgroup")?;
            let phi = ext::classify_cocycle(u, r).map_err(input_err)?;
            let classes = (0..u.base_size()).map(|x| r.h2.class_at(u, x)).collect::<Result<Vec<_>, _>>().map_err(input_err)?;
            ok(json!({"cochain": cochain, "repgroup": repgroup, "phi": phi, "classes": classes}))
        }
        CohCmd::Decompose { cochain, repgroup } => {
            let u = ws.cochain(cochain, "--cochain")?;
            let r = ws.repgroup(repgroup, "--repgroup")?;
            let d = ext::decompose(u, r).map_err(input_err)?;
            ok(json!({
                "cochain": cochain,
                "repgroup": repgroup,
                "phi": d.phi,
                "abelianization": d.abelianization.structure.factors(),
                "v": cochain_json(&d.v),
                "g": cochain_json(&d.g),
                "reconstructed": true,
            }))
        }
    }
}

fn repgroup_json(r: &RepresentationGroup) -> Value {
    let mut seen = r.tg_table.clone();
    seen.sort();
    seen.dedup();
    json!({
        "base_order": r.base().order(),
        "total_order": r.ext.total().order(),
        "z": r.z().factors(),
        "h2_invariants": r.h2.invariants(),
        "tg": r.tg_table,
        "bijective": seen.len() == r.tg_table.len() && r.tg_table.len() as u128 == r.h2.order(),
    })
}

fn ext_cmd(cmd: &ExtCmd, ws: &Workspace) -> CmdResult {
    match cmd {
        ExtCmd::Build { extension } => {
            let e = ws.extension(extension, "--extension")?;
            let pt = ext::is_pointwise_trivial_extension(e).map_err(input_err)?;
            let eta = e.cocycle();
            let gs = e.base().order();
            let values: Vec<Vec<u64>> = (0..gs * gs).map(|i| eta.get(i / gs, i % gs)).collect();
            ok(json!({
                "extension": extension,
                "kernel": e.kernel().factors(),
                "base_order": gs,
                "total_order": e.total().order(),
                "total_abelian": e.total().is_abelian(),
                "section": e.section(),
                "eta": values,
                "pointwise_trivial": pt.pointwise_trivial,
                "total_abelianization": pt.abelianization.structure.invariant_factors(),
            }))
        }
        ExtCmd::Transgress { extension } => {
            let e = ws.extension(extension, "--extension")?;
            let h2 = coh::h2_circle(e.base()).map_err(input_err)?;
            let n = e.kernel();
            let table = (0..n.order())
                .map(|chi| ext::transgression(e, &h2, &n.coords(chi)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(input_err)?;
            ok(json!({"extension": extension, "h2_invariants": h2.invariants(), "tg": table}))
        }
        ExtCmd::Prime { extension, repgroup } => {
            let l = ws.extension(extension, "--extension")?;
            let r = ws.repgroup(repgroup, "--repgroup")?;
            let p = ext::prime_extension(l, r).map_err(input_err)?;
            let pt = ext::is_pointwise_trivial_extension(&p.ext).map_err(input_err)?;
            ok(json!({
                "extension": extension,
                "repgroup": repgroup,
                "order": p.ext.total().order(),
                "kernel": p.ext.kernel().factors(),
                "phi": p.phi.images(),
                "phi_hat": p.phi_hat.images(),
                "pointwise_trivial": pt.pointwise_trivial,
            }))
        }
        ExtCmd::Repgroup { repgroup } => {
            let r = ws.repgroup(repgroup, "--repgroup")?;
            let mut v = repgroup_json(r);
            v["repgroup"] = json!(repgroup);
            ok(v)
        }
    }
}

fn bundle_cmd(cmd: &BundleCmd, ws: &Workspace) -> CmdResult {
    match cmd {
        BundleCmd::Build { cochain } => {
            let u = ws.cochain(cochain, "--cochain")?;
            let z = build_zu(u).map_err(input_err)?;
            z.verify().map_err(|e| CliError::Mismatch(e.to_string()))?;
            let t = trivialization(&z).map_err(input_err)?;
            ok(json!({
                "cochain": cochain,
                "base": z.base_size(),
                "fiber_group": z.fiber_group().factors(),
                "points": z.len(),
                "modulus": z.modulus(),
                "section": t.section,
                "witness": cochain_json(&t.witness),
            }))
        }
        BundleCmd::Product { cochain, with } => {
            let u = ws.cochain(cochain, "--cochain")?;
            let v = ws.cochain(with, "--with")?;
            let zu = build_zu(u).map_err(input_err)?;
            let zv = build_zu(v).map_err(input_err)?;
            let p = bundle_product(&zu, &zv).map_err(input_err)?;
            ok(json!({"cochain": cochain, "with": with, "points": p.product.len(), "map": p.map}))
        }
        BundleCmd::Psi { extension } => {
            let e = ws.extension(extension, "--extension")?;
            let psi = psi_iso_checked(e).map_err(|err| match err {
                bundle::BundleError::Invalid(m) => CliError::Mismatch(m),
                other => input_err(other),
            })?;
            ok(json!({
                "extension": extension,
                "points": psi.bundle.len(),
                "e_ab": psi.e_ab.structure.factors(),
                "map": psi.map,
                "inverse": psi.inverse,
            }))
        }
    }
}

fn alg_cmd(cmd: &AlgCmd, ws: &Workspace, settings: &NumericSettings, max_order: usize) -> CmdResult {
    match cmd {
        AlgCmd::Profile { group, cochain } => {
            let algebras = match (group, cochain) {
                (Some(g), _) => vec![group_algebra(&ws.group(g, "--group")?)],
                (None, Some(c)) => {
                    let u = ws.cochain(c, "--cochain")?;
                    if u.degree() != 2 {
                        return Err(CliError::Input("--cochain must have degree 2".into()));
                    }
                    (0..u.base_size())
                        .map(|x| twisted_group_algebra(&u.evaluate_at(x).map_err(input_err)?).map_err(input_err))
                        .collect::<Result<Vec<_>, _>>()?
                }
                (None, None) => unreachable!("clap enforces --group or --cochain"),
            };
            if algebras.iter().any(|a| a.dim() > max_order) {
                return Err(CliError::Input(format!("algebra dimension exceeds {max_order}")));
            }
            let mut out = Vec::new();
            for (x, a) in algebras.iter().enumerate() {
                let d = block_decomposition(a, &settings.derive(x as u64)).map_err(alg_err)?;
                out.push(json!({
                    "x": x,
                    "dim": a.dim(),
                    "commutative": a.is_commutative(),
                    "block_count": d.exact_count,
                    "profile": d.profile().sizes(),
                }));
            }
            ok(json!({"seed": settings.seed, "profiles": out}))
        }
        AlgCmd::Fibers { cochain } => {
            let u = ws.cochain(cochain, "--cochain")?;
            let cp = crossed_product(u).map_err(input_err)?;
            let space = block_space(&cp.algebra, settings).map_err(alg_err)?;
            let fibers: Vec<FiberSummary> = space
                .fibers
                .iter()
                .enumerate()
                .map(|(x, f)| FiberSummary {
                    x,
                    dim: cp.algebra.fiber(x).dim(),
                    commutative: cp.algebra.fiber(x).is_commutative(),
                    block_count: f.exact_count,
                    profile: f.profile().sizes().to_vec(),
                })
                .collect();
            let orbit_types: Vec<_> = space.fibers.iter().map(|f| f.orbit_types()).collect();
            ok(json!({
                "cochain": cochain,
                "acting": cp.algebra.acting_group().factors(),
                "fibers": to_value(&fibers),
                "orbit_types": orbit_types,
            }))
        }
    }
}

fn alg_err(e: AlgError) -> CliError {
    match e {
        AlgError::ProfileInconsistent { .. }
        | AlgError::NotIsomorphism(_)
        | AlgError::NotEquivariant(_)
        | AlgError::MismatchAt { .. } => CliError::Mismatch(e.to_string()),
        other => input_err(other),
    }
}

/// Runs one workspace check, returning `(pass, report)`.
pub fn run_check(check: &CheckSpec, ws: &Workspace, settings: &NumericSettings) -> Result<(bool, Value), CliError> {
    let r = |key: &str| check.refs.get(key).map(String::as_str).unwrap_or_default();
    let p = |key: &str| format!("checks[{}]/{key}", check.id);
    match check.kind.as_str() {
        "lem-pointwise" => {
            let rep = verify_lem_pointwise(ws.cochain(r("cochain"), &p("cochain"))?).map_err(alg_err)?;
            Ok((rep.pass, to_value(&rep)))
        }
        "prop-decom" => {
            let l = ws.group(r("L"), &p("L"))?;
            let n = ws.group(r("N"), &p("N"))?;
            let rep = verify_prop_decom(&l, &n, ws.cochain(r("cochain"), &p("cochain"))?).map_err(alg_err)?;
            Ok((rep.pass, to_value(&rep)))
        }
        "prop-decom1" => {
            let l = ws.group(r("L"), &p("L"))?;
            let n = ws.group(r("N"), &p("N"))?;
            let u = ws.cochain(r("u"), &p("u"))?;
            let v = ws.cochain(r("v"), &p("v"))?;
            let rep = verify_prop_decom1(&l, &n, u, v).map_err(alg_err)?;
            Ok((rep.pass, to_value(&rep)))
        }
        kind => {
            let input = match kind {
                "thm-pt" => StructureInput::ThmPt {
                    u: ws.cochain(r("cochain"), &p("cochain"))?.clone(),
                    omega: match check.refs.get("omega") {
                        Some(o) => Some(ws.cochain(o, &p("omega"))?.clone()),
                        None => None,
                    },
                },
                "thm-general" => StructureInput::ThmGeneral {
                    u: ws.cochain(r("cochain"), &p("cochain"))?.clone(),
                    rep: ws.repgroup(r("repgroup"), &p("repgroup"))?.clone(),
                },
                "cor-pt-group" => StructureInput::CorPtGroup { ext: ws.extension(r("extension"), &p("extension"))?.clone() },
                "thm-groupex" => StructureInput::ThmGroupex {
                    ext: ws.extension(r("extension"), &p("extension"))?.clone(),
                    rep: ws.repgroup(r("repgroup"), &p("repgroup"))?.clone(),
                },
                other => return Err(CliError::Input(format!("unknown check kind {other:?}"))),
            };
            let rep = verify_structure_theorem(&input, settings).map_err(alg_err)?;
            Ok((rep.pass, to_value(&rep)))
        }
    }
}

fn verify(args: &VerifyArgs, ws: &Workspace, settings: &NumericSettings) -> (Value, i32) {
    let mut selected: Vec<&CheckSpec> = ws
        .checks
        .iter()
        .filter(|c| args.kind == "all" || c.kind == args.kind)
        .filter(|c| args.inputs.is_empty() || args.inputs.contains(&c.id))
        .collect();
    selected.sort_by(|a, b| a.id.cmp(&b.id));
    let mut code = EXIT_PASS;
    let mut checks = Vec::new();
    for c in &selected {
        let entry = match run_check(c, ws, settings) {
            Ok((pass, report)) => {
                if !pass {
                    code = code.max(EXIT_MISMATCH);
                }
                json!({"id": c.id, "kind": c.kind, "pass": pass, "report": report})
            }
            Err(e) => {
                code = code.max(e.code());
                json!({"id": c.id, "kind": c.kind, "pass": false, "error": e.to_json()})
            }
        };
        checks.push(entry);
    }
    let unknown: Vec<&String> = args.inputs.iter().filter(|id| !ws.checks.iter().any(|c| &c.id == *id)).collect();
    if !unknown.is_empty() {
        code = EXIT_INPUT;
    }
    let report = json!({
        "report_version": REPORT_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "input_sha256": ws.sha256,
        "seed": settings.seed,
        "tol": settings.tol,
        "kind": args.kind,
        "unknown_inputs": unknown,
        "checks": checks,
        "pass": code == EXIT_PASS,
    });
    (report, code)
}

/// Entry point for the binary: runs, writes output, returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let output = Cli::try_parse_from(&args).ok().and_then(|c| c.output);
    let (text, code) = run(args);
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, &text) {
                eprintln!("cannot write {}: {e}", path.display());
                return EXIT_INPUT;
            }
        }
        None if code == EXIT_INPUT && !text.trim_start().starts_with('{') => eprint!("{text}"),
        None => print!("{text}"),
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h2_circle_of_klein() {
        let (out, code) = run(["cohbundle", "coh", "h2", "--group", "klein", "--circle"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["invariants"], json!([2]));
    }

    #[test]
    fn missing_group_is_input_error() {
        let (out, code) = run(["cohbundle", "group", "info", "--group", "nope"]);
        assert_eq!(code, EXIT_INPUT);
        assert!(out.contains("UnresolvedRef"));
    }

    #[test]
    fn usage_error_exits_two() {
        let (_, code) = run(["cohbundle", "coh", "h2", "--group", "z2"]);
        assert_eq!(code, EXIT_INPUT);
    }

    #[test]
    fn d4_profile() {
        let (out, code) = run(["cohbundle", "alg", "profile", "--group", "d4"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["profiles"][0]["profile"], json!([1, 1, 1, 1, 2]));
    }
}
