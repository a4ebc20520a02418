//! `wpp`: reproducible verification runs over weighted partition posets.

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use wpp::acceptance::{run_suite, SuiteConfig};
use wpp::homology::{betti_numbers, fundamental_cycle, verify_dual_bases, whitney_cohomology_ranks, ChainVector, OrderComplex};
use wpp::invariants::{
    characteristic_formula, characteristic_polynomial, is_identity, mat_mul, mu_augmented, mu_augmented_formula,
    mu_polynomial, mu_product_formula, rank_generating_formula, rank_generating_function, whitney_matrices,
};
use wpp::labeling::verify_el;
use wpp::partition::full_mask;
use wpp::poly::{binomial, ipow};
use wpp::report::{family_counts_csv, labeled_dot, poset_report};
use wpp::straighten::{
    interval_cochain, is_straightened, verify_full_bases, verify_interval_bases, Oracle, Side, Straightener, TreeSum,
};
use wpp::trees::bicolored::{enumerate_bicolored, BicoloredTree};
use wpp::trees::families::{enumerate_family, is_liu_lyndon, Family};
use wpp::trees::liu::LiuOrder;
use wpp::trees::psi::{psi, psi_inverse};
use wpp::trees::rooted::{descent_polynomial, enumerate_rooted_trees, RootedTree};
use wpp::{Caps, Error, Poset, Variant};

#[derive(Parser, Debug)]
#[command(name = "wpp", version, about = "Verification runs over weighted partition posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    run: RunConfig,
}

#[derive(clap::Args, Debug, Clone)]
struct RunConfig {
    /// Size of the ground set.
    #[arg(long, global = true, default_value_t = 3)]
    n: usize,
    /// Weight of the maximal element, or the number of red nodes / descents.
    #[arg(long, global = true)]
    i: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = VariantArg::Weighted)]
    variant: VariantArg,
    #[arg(long, global = true, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long, global = true, value_enum, default_value_t = SideArg::Cohomology)]
    side: SideArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Cap on enumerated elements and chains.
    #[arg(long, global = true)]
    max_elements: Option<usize>,
    /// Worker threads; all outputs are independent of this.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Rank sizes, Möbius values, characteristic polynomial, Whitney numbers.
    Invariants,
    /// Check the edge labeling on every interval of the augmented poset.
    ElVerify,
    /// Betti numbers of an interval (with --i) or of the poset without bottom.
    Homology {
        /// Write the top boundary matrix as sparse triplets to this file.
        #[arg(long)]
        dump_matrix: Option<std::path::PathBuf>,
    },
    /// Cardinality and rank of the tree bases in top cohomology.
    Bases,
    /// Rewrite trees into the comb basis and certify the result.
    Straighten {
        /// A single tree in bracket notation, e.g. "[1,<2,3>]".
        #[arg(long)]
        tree: Option<String>,
        /// Print every rewrite step.
        #[arg(long)]
        trace: bool,
    },
    /// Liu's bijection from rooted trees to Liu-Lyndon trees.
    Psi {
        /// A single rooted tree, e.g. "2(1,3)".
        #[arg(long)]
        tree: Option<String>,
    },
    /// Whitney cohomology ranks.
    Whitney,
    /// The acceptance suite with every size bound lowered to --n.
    ReportAll {
        /// Sample this many trees at n = 5 in the straightening criterion.
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum VariantArg {
    Weighted,
    Pointed,
    Augmented,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FamilyArg {
    Comb,
    Lyndon,
    Liu,
    Tree,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SideArg {
    Cohomology,
    Lie2,
    Full,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Weighted => Variant::Weighted,
            VariantArg::Pointed => Variant::Pointed,
            VariantArg::Augmented => Variant::WeightedAugmented,
        }
    }
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Cohomology => Side::Cohomology,
            SideArg::Lie2 => Side::Lie2,
            SideArg::Full => Side::FullPoset,
        }
    }
}

/// Result of one run before formatting.
struct Outcome {
    pass: bool,
    result: Value,
    text: String,
    csv: Option<String>,
    dot: Option<String>,
}

impl Outcome {
    fn new(pass: bool, result: Value, text: String) -> Self {
        Outcome {
            pass,
            result,
            text,
            csv: None,
            dot: None,
        }
    }
}

type Run = std::result::Result<Outcome, Error>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn caps(cfg: &RunConfig) -> Caps {
    let mut c = Caps::default();
    if let Some(m) = cfg.max_elements {
        c.max_elements = m;
    }
    c
}

fn need_i(cfg: &RunConfig) -> std::result::Result<usize, Error> {
    cfg.i.ok_or_else(|| Error::Argument("--i is required here".into()))
}

fn invariants(cfg: &RunConfig, caps: &Caps) -> Run {
    let n = cfg.n;
    let variant: Variant = cfg.variant.into();
    let p = Poset::build(n, variant, caps)?;
    let report = poset_report(&p, caps)?;
    let mut checks: Vec<(String, bool)> = Vec::new();
    if variant != Variant::WeightedAugmented {
        checks.push(("rank sizes".into(), rank_generating_function(&p) == rank_generating_formula(n)));
        checks.push((
            "characteristic polynomial".into(),
            characteristic_polynomial(&p, caps)? == characteristic_formula(n),
        ));
    }
    if variant == Variant::Weighted {
        checks.push(("mobius polynomial".into(), mu_polynomial(&p, caps)? == mu_product_formula(n)));
    }
    if variant == Variant::WeightedAugmented {
        checks.push(("augmented mobius".into(), num_bigint::BigInt::from(mu_augmented(&p, caps)?) == mu_augmented_formula(n)));
    }
    let (a, b) = whitney_matrices(n);
    checks.push(("whitney matrices".into(), is_identity(&mat_mul(&a, &b))));
    let pass = checks.iter().all(|c| c.1);
    let mut text = format!("{variant} poset, n = {n}, {} elements\nrank sizes {:?}\n", p.len(), report.rank_sizes);
    for (name, ok) in &checks {
        let _ = writeln!(text, "{} {name}", if *ok { "ok  " } else { "FAIL" });
    }
    let checks_json: Vec<Value> = checks.iter().map(|(k, ok)| json!({"check": k, "pass": ok})).collect();
    let mut out = Outcome::new(pass, json!({"report": to_value(&report), "checks": checks_json}), text);
    out.dot = Some(if variant == Variant::Pointed { p.to_dot() } else { labeled_dot(&p)? });
    Ok(out)
}

fn el_verify(cfg: &RunConfig, caps: &Caps) -> Run {
    let p = Poset::build(cfg.n, Variant::WeightedAugmented, caps)?;
    let r = verify_el(&p)?;
    let pass = r.violations == 0;
    let text = format!(
        "{} intervals, {} violations\nconvention: {}\n",
        r.intervals.len(),
        r.violations,
        r.convention
    );
    let failing: Vec<Value> = r.intervals.iter().filter(|x| !x.ok()).map(to_value).collect();
    let mut out = Outcome::new(
        pass,
        json!({"intervals": r.intervals.len(), "violations": r.violations, "convention": r.convention, "failing": failing}),
        text,
    );
    out.csv = Some(r.to_csv());
    out.dot = Some(labeled_dot(&p)?);
    Ok(out)
}

fn homology(cfg: &RunConfig, caps: &Caps, dump: Option<&std::path::Path>) -> Run {
    let n = cfg.n;
    Caps::check("homology n", n, caps.homology_n)?;
    let p = Poset::build(n, Variant::Weighted, caps)?;
    let (k, expected) = match (cfg.i, cfg.side) {
        (Some(i), SideArg::Cohomology | SideArg::Lie2) => {
            let top = p
                .top_block(i as u32)
                .ok_or_else(|| Error::Argument(format!("--i must be below {n}")))?;
            let want = descent_polynomial(n, caps)?.coeff(i);
            (OrderComplex::open_interval(p.clone(), p.bottom(), top, caps)?, want)
        }
        _ => (OrderComplex::without_bottom(p.clone(), caps)?, ipow(n as i64 - 1, n as u32 - 1)),
    };
    let id = match cfg.i {
        Some(i) if cfg.side != SideArg::Full => format!("(0,[{n}]^{i})"),
        _ => format!("P{n} without bottom"),
    };
    let r = betti_numbers(&id, &k);
    if let Some(path) = dump {
        let m = k.boundary_matrix(k.top_dim());
        std::fs::write(path, m.to_triplets()).map_err(|e| Error::Argument(format!("{}: {e}", path.display())))?;
    }
    let lower_zero = r.betti[..r.betti.len().saturating_sub(1)].iter().all(|&b| b == 0);
    let pass = num_bigint::BigInt::from(r.top_betti()) == expected && lower_zero && r.torsion_top.is_empty();
    let text = format!(
        "{id}\nchains per dimension {:?}\nreduced betti (from dimension -1) {:?}\nexpected top {expected}\ntorsion at top {:?}\n",
        r.dims, r.betti, r.torsion_top
    );
    let mut v = to_value(&r);
    v["expected_top"] = json!(expected.to_string());
    Ok(Outcome::new(pass, v, text))
}

fn bases(cfg: &RunConfig, caps: &Caps) -> Run {
    let n = cfg.n;
    let oracle = Oracle::new(n, caps)?;
    if cfg.family == Some(FamilyArg::Tree) {
        let i = need_i(cfg)?;
        let order = LiuOrder::new(*caps).linear_extension(full_mask(n), i)?;
        let cycles: Vec<ChainVector> = order
            .iter()
            .map(|t| fundamental_cycle(t, &oracle.host))
            .collect::<wpp::Result<_>>()?;
        let cochains: Vec<ChainVector> = order
            .iter()
            .map(|t| interval_cochain(&psi(t), &oracle.host))
            .collect::<wpp::Result<_>>()?;
        let d = verify_dual_bases(&cycles, &cochains)?;
        let pass = d.upper_triangular && d.unit_diagonal && d.invertible_integers;
        let text = format!(
            "pairing of fundamental cycles with psi cochains, {} trees in Liu order\nupper triangular {}, unit diagonal {}, determinant {}\n",
            d.size, d.upper_triangular, d.unit_diagonal, d.determinant
        );
        return Ok(Outcome::new(pass, to_value(&d), text));
    }
    let report = if cfg.side == SideArg::Full {
        verify_full_bases(&oracle, caps)?
    } else {
        let i = need_i(cfg)?;
        let families: Vec<Family> = match cfg.family {
            Some(FamilyArg::Comb) => vec![Family::Comb],
            Some(FamilyArg::Lyndon) => vec![Family::Lyndon],
            Some(FamilyArg::Liu) => vec![Family::Liu],
            _ => Family::ALL.to_vec(),
        };
        verify_interval_bases(&oracle, i, &families, caps)?
    };
    let mut text = String::new();
    for e in &report.entries {
        let _ = writeln!(
            text,
            "{}: {} cochains, rank {}, betti {}, full rank {}",
            e.family, e.count, e.rank, e.betti, e.full_rank
        );
    }
    let result = if report.entries.len() == 1 {
        to_value(&report.entries[0])
    } else {
        to_value(&report)
    };
    Ok(Outcome::new(report.ok(), result, text))
}

fn straighten_cmd(cfg: &RunConfig, caps: &Caps, tree: Option<&str>, trace: bool) -> Run {
    let side: Side = cfg.side.into();
    let eng = if trace { Straightener::with_trace(side) } else { Straightener::new(side) };
    if let Some(s) = tree {
        let t = BicoloredTree::parse(s)?;
        let n = t.leaf_count();
        if t.mask() != full_mask(n) {
            return Err(Error::Argument("leaves must be 1..n".into()));
        }
        let out = eng.straighten(&t)?;
        let oracle = Oracle::new(n, caps)?;
        let sound = oracle.certifies(&TreeSum::single(side, t.clone(), 1), &out)?;
        let supported = is_straightened(&out);
        let steps = eng.take_trace();
        let mut text = format!("{t} = {out}\n");
        for st in &steps {
            let _ = writeln!(text, "{st}");
        }
        let _ = writeln!(text, "supported on the basis {supported}, certified by the coboundary oracle {sound}");
        let result = json!({
            "input": t.to_string(),
            "output": to_value(&out),
            "supported": supported,
            "certified": sound,
            "trace": steps.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        });
        return Ok(Outcome::new(supported && sound, result, text));
    }
    let n = cfg.n;
    let red = if side == Side::FullPoset { None } else { cfg.i };
    let oracle = Oracle::new(n, caps)?;
    let trees = enumerate_bicolored(n, red, caps)?;
    use rayon::prelude::*;
    let failures: Vec<String> = trees
        .par_iter()
        .filter_map(|t| {
            let r = eng.straighten(t).and_then(|s| {
                Ok(is_straightened(&s) && oracle.certifies(&TreeSum::single(side, t.clone(), 1), &s)?)
            });
            match r {
                Ok(true) => None,
                Ok(false) => Some(t.to_string()),
                Err(e) => Some(format!("{t}: {e}")),
            }
        })
        .collect();
    let text = format!(
        "{} trees straightened on the {side} side, {} failures\n",
        trees.len(),
        failures.len()
    );
    Ok(Outcome::new(
        failures.is_empty(),
        json!({"side": side, "trees": trees.len(), "failures": failures}),
        text,
    ))
}

fn psi_cmd(cfg: &RunConfig, caps: &Caps, tree: Option<&str>) -> Run {
    if let Some(s) = tree {
        let t = RootedTree::parse(s)?;
        let b = psi(&t);
        let back = psi_inverse(&b)?;
        let pass = back == t && is_liu_lyndon(&b) && b.red_count() == t.descents();
        let text = format!("{s} -> {b}\n");
        return Ok(Outcome::new(
            pass,
            json!({"rooted": s, "psi": b.to_string(), "tree": to_value(&b), "round_trip": back == t}),
            text,
        ));
    }
    let n = cfg.n;
    let labels: Vec<u32> = (1..=n as u32).collect();
    let trees = enumerate_rooted_trees(&labels, cfg.i, caps)?;
    let mut rows = Vec::with_capacity(trees.len());
    let mut text = String::new();
    let mut pass = true;
    let mut images = std::collections::BTreeSet::new();
    for t in &trees {
        let b = psi(t);
        let ok = psi_inverse(&b)? == *t && is_liu_lyndon(&b) && b.red_count() == t.descents();
        pass &= ok && images.insert(b.clone());
        let _ = writeln!(text, "{t} -> {b}");
        rows.push(json!({"rooted": t.to_string(), "psi": b.to_string(), "descents": t.descents()}));
    }
    let liu = enumerate_family(Family::Liu, n, cfg.i, caps)?;
    pass &= liu.len() == images.len() && liu.iter().all(|t| images.contains(t));
    let mut out = Outcome::new(pass, json!({"n": n, "i": cfg.i, "pairs": rows}), text);
    out.csv = Some(family_counts_csv(n, caps)?);
    Ok(out)
}

fn whitney_cmd(cfg: &RunConfig, caps: &Caps) -> Run {
    let n = cfg.n;
    let p = Poset::build(n, Variant::Weighted, caps)?;
    let ranks = whitney_cohomology_ranks(&p, caps)?;
    let expected: Vec<String> = (0..n)
        .map(|r| (binomial(n as u64 - 1, r as u64) * ipow(n as i64, r as u32)).to_string())
        .collect();
    let got: Vec<String> = ranks.iter().map(|x| x.to_string()).collect();
    let total: u64 = ranks.iter().sum();
    let pass = got == expected && num_bigint::BigInt::from(total) == ipow(n as i64 + 1, n as u32 - 1);
    let text = format!("whitney cohomology ranks {got:?}, total {total}\n");
    Ok(Outcome::new(pass, json!({"ranks": ranks, "expected": expected, "total": total}), text))
}

fn report_all(cfg: &RunConfig, caps: &Caps, samples: Option<usize>) -> Run {
    let suite = SuiteConfig {
        max_n: Some(cfg.n),
        seed: cfg.seed,
        samples,
        caps: *caps,
    };
    let mut text = String::new();
    let results = run_suite(&suite, |r| {
        if cfg.format == Format::Text {
            println!("{}", r.line());
        }
    });
    let pass = results.iter().all(|r| r.pass);
    let _ = writeln!(
        text,
        "{} of {} criteria pass",
        results.iter().filter(|r| r.pass).count(),
        results.len()
    );
    Ok(Outcome::new(pass, json!({"criteria": to_value(&results)}), text))
}

fn error_record(e: &Error) -> Value {
    match e {
        Error::Resource { what, requested, cap } => {
            json!({"error": "resource", "what": what, "requested": requested, "cap": cap})
        }
        Error::Argument(m) => json!({"error": "argument", "message": m}),
        Error::Internal(m) => json!({"error": "internal", "message": m}),
        Error::Overflow(m) => json!({"error": "overflow", "message": m}),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Invariants => "invariants",
        Command::ElVerify => "el-verify",
        Command::Homology { .. } => "homology",
        Command::Bases => "bases",
        Command::Straighten { .. } => "straighten",
        Command::Psi { .. } => "psi",
        Command::Whitney => "whitney",
        Command::ReportAll { .. } => "report-all",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = cli.run.clone();
    if let Some(j) = cfg.jobs {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global();
    }
    let name = command_name(&cli.command);
    let outcome = if cfg.n == 0 {
        Err(Error::Argument("--n must be at least 1".into()))
    } else if cfg.i.is_some_and(|i| i >= cfg.n) {
        Err(Error::Argument("--i must be below --n".into()))
    } else {
        let caps = caps(&cfg);
        match &cli.command {
            Command::Invariants => invariants(&cfg, &caps),
            Command::ElVerify => el_verify(&cfg, &caps),
            Command::Homology { dump_matrix } => homology(&cfg, &caps, dump_matrix.as_deref()),
            Command::Bases => bases(&cfg, &caps),
            Command::Straighten { tree, trace } => straighten_cmd(&cfg, &caps, tree.as_deref(), *trace),
            Command::Psi { tree } => psi_cmd(&cfg, &caps, tree.as_deref()),
            Command::Whitney => whitney_cmd(&cfg, &caps),
            Command::ReportAll { samples } => report_all(&cfg, &caps, *samples),
        }
    };
    let envelope = |pass: bool, result: Value| {
        json!({
            "command": name,
            "n": cfg.n,
            "i": cfg.i,
            "seed": cfg.seed,
            "pass": pass,
            "result": result,
        })
    };
    match outcome {
        Ok(o) => {
            match cfg.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&envelope(o.pass, o.result)).expect("json")),
                Format::Csv => match &o.csv {
                    Some(c) => print!("{c}"),
                    None => print!("{}", o.text),
                },
                Format::Dot => match &o.dot {
                    Some(d) => print!("{d}"),
                    None => print!("{}", o.text),
                },
                Format::Text => print!("{}", o.text),
            }
            if o.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            let record = envelope(false, error_record(&e));
            match cfg.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&record).expect("json")),
                _ => eprintln!("error: {e}"),
            }
            match e {
                Error::Resource { .. } | Error::Argument(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
