//! Command-line front end. `run_command` is the whole program minus process
//! exit, so it can be driven from tests.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use crate::beck::{
    format_omega, kahler_with_limits, lift_check_torsor, pullback_module, trivial_extension,
    unramified_check_with_limits, verify_pullback_universal, verify_torsor, TorsorJson,
};
use crate::corpus::{run_group_suite, run_ring_suite};
use crate::error::{Error, Result};
use crate::fpalg::{AlgebraHom, AlgebraJson, AlgebraPresentation, FiniteRingTable, ModuleTable, ModuleTableJson, RingTableJson};
use crate::modgb::ZeroCertificate;
use crate::polyring::Limits;
use crate::report::{canonical_json, CaseReport, SuiteReport, Verdict};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FAIL: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "beckdiff", version, about = "Beck modules, torsors and Kähler differentials over finite tables")]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GlobalOpts {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cap on enumerated candidate homomorphisms.
    #[arg(long, global = true, default_value_t = Limits::default().max_homs)]
    max_homs: u64,
    /// Cap on polynomial degree during Gröbner computations.
    #[arg(long, global = true, default_value_t = Limits::default().max_degree)]
    max_degree: u32,
    /// Cap on the number of terms in any intermediate polynomial.
    #[arg(long, global = true, default_value_t = Limits::default().max_terms)]
    max_terms: usize,
    /// Record wall-clock time per case (makes JSON output non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
}

impl GlobalOpts {
    fn limits(&self) -> Limits {
        Limits { max_degree: self.max_degree, max_terms: self.max_terms, max_homs: self.max_homs }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Presentation of Ω and whether it is zero.
    Kahler {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Decide formal unramifiedness.
    Unramified {
        #[arg(long)]
        algebra: PathBuf,
        /// Print the two distinct lifts when Ω is nonzero.
        #[arg(long)]
        witness: bool,
    },
    /// Torsor checks.
    Torsor {
        #[command(subcommand)]
        action: TorsorCmd,
    },
    /// Lifting checks.
    Lift {
        #[command(subcommand)]
        action: LiftCmd,
    },
    /// Pull a Beck module back along a hom and verify the universal property.
    Pullback {
        #[arg(long)]
        hom: PathBuf,
        #[arg(long)]
        module: PathBuf,
    },
    /// Group-side checks.
    Groups {
        #[command(subcommand)]
        action: GroupsCmd,
    },
    /// Acceptance corpora.
    Corpus {
        #[command(subcommand)]
        action: CorpusCmd,
    },
}

#[derive(Subcommand, Debug)]
enum TorsorCmd {
    Verify {
        #[arg(long)]
        surjection: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum LiftCmd {
    Check {
        #[arg(long)]
        domain: PathBuf,
        #[arg(long)]
        torsor: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum GroupsCmd {
    Unramified {
        #[arg(long, default_value_t = 8)]
        max_order: usize,
        /// Directory of group table JSON files replacing the built-in set.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Suite {
    Rings,
    Groups,
}

#[derive(Subcommand, Debug)]
enum CorpusCmd {
    Run {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 9)]
        max_size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

/// `--hom` input: a presented domain, a finite codomain table and generator images.
#[derive(Debug, Clone, Deserialize)]
pub struct HomJson {
    pub domain: AlgebraJson,
    pub codomain: RingTableJson,
    pub images: Vec<usize>,
}

/// `--module` input: a base ring table and a module over it.
#[derive(Debug, Clone, Deserialize)]
pub struct BeckModuleJson {
    pub base: RingTableJson,
    pub module: ModuleTableJson,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn read_algebra(path: &Path, limits: Limits) -> Result<Arc<AlgebraPresentation>> {
    let j: AlgebraJson = read_json(path)?;
    Ok(Arc::new(AlgebraPresentation::from_json(&j, limits)?))
}

fn case_id(path: &Path) -> String {
    path.file_stem().and_then(|s| s.to_str()).unwrap_or("input").to_string()
}

/// What a subcommand produced: a single case or a whole suite.
enum Outcome {
    Case(CaseReport),
    Suite(SuiteReport),
}

/// Parses `argv` (including the program name), runs the command and writes
/// the report to `out`. Diagnostics go to `err`. Returns the exit code.
pub fn run_command(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let opts = cli.opts.clone();
    let outcome = match dispatch(cli.command, &opts) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_INPUT;
        }
    };
    let (text, failed) = match &outcome {
        Outcome::Case(c) => (render_case(c, opts.format), c.verdict != Verdict::Pass),
        Outcome::Suite(s) => (
            match opts.format {
                Format::Json => s.to_json(),
                Format::Text => s.to_text(),
            },
            !s.all_pass(),
        ),
    };
    if out.write_all(text.as_bytes()).is_err() {
        return EXIT_INPUT;
    }
    if failed {
        EXIT_FAIL
    } else {
        EXIT_PASS
    }
}

fn render_case(c: &CaseReport, f: Format) -> String {
    match f {
        Format::Json => canonical_json(&serde_json::to_value(c).expect("report serializes")),
        Format::Text => {
            let mut s = c.summary.clone();
            if !s.ends_with('\n') {
                s.push('\n');
            }
            s
        }
    }
}

fn dispatch(cmd: Command, opts: &GlobalOpts) -> Result<Outcome> {
    let limits = opts.limits();
    Ok(match cmd {
        Command::Kahler { algebra } => Outcome::Case(kahler_cmd(&algebra, limits)?),
        Command::Unramified { algebra, witness } => Outcome::Case(unramified_cmd(&algebra, witness, limits)?),
        Command::Torsor { action: TorsorCmd::Verify { surjection } } => Outcome::Case(torsor_cmd(&surjection)?),
        Command::Lift { action: LiftCmd::Check { domain, torsor } } => Outcome::Case(lift_cmd(&domain, &torsor, limits)?),
        Command::Pullback { hom, module } => Outcome::Case(pullback_cmd(&hom, &module, limits)?),
        Command::Groups { action: GroupsCmd::Unramified { max_order, fixtures } } => {
            Outcome::Suite(run_group_suite(max_order, 0, fixtures.as_deref(), limits.max_homs, opts.timings)?)
        }
        Command::Corpus { action: CorpusCmd::Run { suite, max_size, seed, fixtures } } => Outcome::Suite(match suite {
            Suite::Rings => run_ring_suite(max_size, seed, limits, opts.timings)?,
            Suite::Groups => run_group_suite(max_size, seed, fixtures.as_deref(), limits.max_homs, opts.timings)?,
        }),
    })
}

fn kahler_cmd(path: &Path, limits: Limits) -> Result<CaseReport> {
    let b = read_algebra(path, limits)?;
    let omega = kahler_with_limits(&b, limits)?;
    let zt = omega.zero_test()?;
    let pres = omega.presentation();
    let gens = pres.generators().to_vec();
    let relations: Vec<String> = pres.relations().iter().map(|r| format_omega(r, &gens)).collect();
    let certificate = match &zt.certificate {
        ZeroCertificate::Zero { combinations } => json!({
            "kind": "zero",
            "combinations": combinations.iter().map(|row| row.iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
        ZeroCertificate::Nonzero { generator, remainder } => json!({
            "kind": "nonzero",
            "generator": gens[*generator],
            "remainder": format_omega(remainder, &gens),
        }),
    };
    let verdict_word = if zt.is_zero { "zero" } else { "nonzero" };
    let mut text = format!("Ω generators: [{}]\n", gens.join(", "));
    text.push_str(&format!("Ω relations: [{}]\n", relations.join(", ")));
    text.push_str(&format!("Ω is {verdict_word}\n"));
    let details = json!({
        "generators": gens,
        "relations": relations,
        "presentation": serde_json::to_value(pres.to_json().relations)?,
        "zero": zt.is_zero,
        "certificate": certificate,
    });
    Ok(CaseReport::new(case_id(path), "kahler", Verdict::Pass, text, details))
}

fn unramified_cmd(path: &Path, want_witness: bool, limits: Limits) -> Result<CaseReport> {
    let b = read_algebra(path, limits)?;
    let rep = unramified_check_with_limits(&b, limits)?;
    let mut text = format!("formally unramified: {}\n", rep.unramified);
    let mut details = json!({ "unramified": rep.unramified });
    if let Some(e) = &rep.witness_error {
        text.push_str(&format!("witness: unavailable ({e})\n"));
        details["witness_error"] = json!(e.to_string());
    }
    if let Some(w) = &rep.witness {
        let gens = b.generators();
        let show = |v: &[crate::beck::SymElem]| -> Vec<String> {
            v.iter().map(|s| format!("({}, {})", s.b, format_omega(&s.m, &omega_names(gens)))).collect()
        };
        let (s0, s1) = (show(&w.s0), show(&w.s1));
        details["witness"] = json!({ "s0": s0, "s1": s1, "differing_generator": gens[w.differing_generator] });
        if want_witness {
            for (i, g) in gens.iter().enumerate() {
                text.push_str(&format!("{g} -> s0 {} | s1 {}\n", s0[i], s1[i]));
            }
        }
    }
    Ok(CaseReport::new(case_id(path), "unramified", Verdict::Pass, text, details))
}

fn omega_names(gens: &[String]) -> Vec<String> {
    gens.iter().map(|g| format!("d{g}")).collect()
}

fn torsor_cmd(path: &Path) -> Result<CaseReport> {
    let j: TorsorJson = read_json(path)?;
    let q = j.to_map()?;
    let id = case_id(path);
    match verify_torsor(&q) {
        Ok(t) => {
            let text = format!(
                "torsor: verified ({}), |K| = {}, |M ×_Y Z| = {}\n",
                if t.is_split() { "split" } else { "non-split" },
                t.kernel().len(),
                t.fiber_product_size()
            );
            let details = json!({
                "split": t.is_split(),
                "kernel": t.kernel(),
                "section": t.section(),
                "fiber_product_size": t.fiber_product_size(),
            });
            Ok(CaseReport::new(id, "torsor verify", Verdict::Pass, text, details))
        }
        Err(e @ Error::KernelSquareNonzero { a, b, product }) => Ok(CaseReport::new(
            id,
            "torsor verify",
            Verdict::Fail,
            format!("KernelSquareNonzero: {e}\n"),
            json!({ "error": "KernelSquareNonzero", "a": a, "b": b, "product": product }),
        )),
        Err(e @ Error::NotSurjective) => {
            Ok(CaseReport::new(id, "torsor verify", Verdict::Fail, "NotSurjective\n", json!({ "error": e.to_string() })))
        }
        Err(e) => Err(e),
    }
}

fn lift_cmd(domain: &Path, torsor: &Path, limits: Limits) -> Result<CaseReport> {
    let b = read_algebra(domain, limits)?;
    let j: TorsorJson = read_json(torsor)?;
    let t = verify_torsor(&j.to_map()?)?;
    let r = lift_check_torsor(&b, &t, limits)?;
    let mut text = format!("|Hom(B, Z)| = {}, |Hom(B, Y)| = {}, injective: {}\n", r.hom_z, r.hom_y, r.injective);
    if let Some(s) = r.surjective {
        text.push_str(&format!("surjective: {s}\n"));
    }
    if let Some((h1, h2)) = &r.collision {
        text.push_str(&format!("collision: {h1:?} and {h2:?}\n"));
    }
    let details = serde_json::to_value(&r)?;
    Ok(CaseReport::new(format!("{}@{}", case_id(domain), case_id(torsor)), "lift check", Verdict::Pass, text, details))
}

fn pullback_cmd(hom: &Path, module: &Path, limits: Limits) -> Result<CaseReport> {
    let hj: HomJson = read_json(hom)?;
    let x = Arc::new(AlgebraPresentation::from_json(&hj.domain, limits)?);
    let y = Arc::new(FiniteRingTable::from_json(&hj.codomain)?);
    let psi = AlgebraHom::new(x.clone(), y, hj.images)?;
    let mj: BeckModuleJson = read_json(module)?;
    let base = Arc::new(FiniteRingTable::from_json(&mj.base)?);
    let m = trivial_extension(base.clone(), ModuleTable::from_json(base, &mj.module)?)?;
    let pb = pullback_module(&psi, &m)?;
    let table_map = crate::fpalg::RingMap::new(pb.to_x.target().clone(), psi.codomain().clone(), {
        let qt = crate::fpalg::to_finite_table(&x)?;
        (0..qt.table().size()).map(|e| psi.apply(&qt.polynomial_of(e))).collect::<Result<Vec<_>>>()?
    })?;
    let tests = vec![x.clone(), Arc::new(AlgebraPresentation::base_only(x.base()))];
    let cones = verify_pullback_universal(&pb, &table_map, &m, &tests, limits)?;
    let text = format!(
        "pullback: |X ×_Y (Y ⊕ M)| = {}, |ψ*M| = {}, universal property checked on {cones} cones\n",
        pb.fiber.size(),
        pb.beck.module().size()
    );
    let details = json!({
        "fiber_size": pb.fiber.size(),
        "module_size": pb.beck.module().size(),
        "cones_checked": cones,
        "module": serde_json::to_value(pb.beck.module().to_json())?,
    });
    Ok(CaseReport::new(format!("{}@{}", case_id(hom), case_id(module)), "pullback", Verdict::Pass, text, details))
}
