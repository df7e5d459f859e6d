use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use trinity_core::certificate::{self, Certificate, DEFAULT_GROUP_BUDGET};
use trinity_core::flagmap::{toys, RegularMap};
use trinity_core::lift::{self, CornerVoltage, DEFAULT_LIFT_BUDGET};
use trinity_core::{plan, table, Error, Result};

#[derive(Parser)]
#[command(name = "trinity", version, about = "Regular maps with self-duality and self-Petrie-duality")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Norms N(g) and their factorizations for a range of odd k.
    Table(TableArgs),
    /// Build and check the map for valency K and write its certificate.
    Construct {
        k: u64,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Largest group order enumerated for flag-level checks.
        #[arg(long, default_value_t = DEFAULT_GROUP_BUDGET)]
        budget: u64,
    },
    /// Re-check a certificate file.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GROUP_BUDGET)]
        budget: u64,
    },
    /// Split an odd valency into a base valency and a lift factor.
    Plan { m: u64 },
    /// Lift a base map by the corner voltage assignment over Z_n.
    Lift(LiftArgs),
    /// Write the colored flag graph of a certificate's map in DOT format.
    ExportFlaggraph {
        file: PathBuf,
        #[arg(long)]
        dot: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GROUP_BUDGET)]
        budget: u64,
    },
}

#[derive(Args)]
struct TableArgs {
    from_pos: Option<u64>,
    to_pos: Option<u64>,
    #[arg(long, conflicts_with = "from_pos")]
    from: Option<u64>,
    #[arg(long, conflicts_with = "to_pos")]
    to: Option<u64>,
}

#[derive(Args)]
#[command(group(ArgGroup::new("source").required(true).args(["base", "toy"])))]
struct LiftArgs {
    /// Certificate file of the base map.
    #[arg(long)]
    base: Option<PathBuf>,
    /// Built-in base map: z2cubed, tetrahedron or theta.
    #[arg(long)]
    toy: Option<String>,
    #[arg(long)]
    n: u32,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    /// Largest number of lifted flags enumerated in exhaustive mode.
    #[arg(long, default_value_t = DEFAULT_LIFT_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Orbit,
}

/// What a command produced: text, the JSON form, and whether it counts as a pass.
struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

fn read_certificate(path: &Path) -> Result<Certificate> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))?;
    Certificate::from_json(&text)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}

fn cmd_table(args: TableArgs) -> Result<Outcome> {
    let from = args.from.or(args.from_pos).unwrap_or(5);
    let to = args.to.or(args.to_pos).unwrap_or(from.max(29));
    let rows = table::table(from, to)?;
    let bad = table::mismatches(&rows);
    let mut text = format!("{:>4}  {:>24}  {}\n", "k", "N(g)", "factorization");
    for r in &rows {
        let mark = match r.matches_reference {
            Some(false) => "  MISMATCH",
            _ => "",
        };
        let cong = if r.congruences_hold { "" } else { "  (congruences fail)" };
        text += &format!("{:>4}  {:>24}  {}{cong}{mark}\n", r.k, r.signed_norm(), r.factor_string());
    }
    let checked = rows.iter().filter(|r| r.matches_reference.is_some()).count();
    if checked > 0 {
        text += &format!("reference rows checked: {checked}, mismatches: {}\n", bad.len());
    }
    Ok(Outcome { text, json: json!({ "rows": rows, "mismatches": bad }), ok: bad.is_empty() })
}

fn fmt_elem(e: &certificate::CertElem) -> String {
    if e.a1 == 0 {
        e.a0.to_string()
    } else {
        format!("{} + {}t", e.a0, e.a1)
    }
}

fn fmt_mat(m: &certificate::CertMatrix) -> String {
    format!("[[{}, {}], [{}, {}]]", fmt_elem(&m.a), fmt_elem(&m.b), fmt_elem(&m.c), fmt_elem(&m.d))
}

fn cmd_construct(k: u64, prime: Option<u64>, out: Option<PathBuf>, budget: u64) -> Result<Outcome> {
    let cert = certificate::construct(k, prime, budget)?;
    let body = cert.to_json();
    if let Some(path) = &out {
        write_file(path, &body)?;
    }
    let field = match cert.field.nonresidue {
        Some(nu) => format!("GF({}^2), t^2 = {nu}", cert.p),
        None => format!("GF({})", cert.p),
    };
    let mut text = format!(
        "k = {}  N(g) = {}  p = {}  epsilon = {}\nfield {field}\nzeta = {}  xi = {}  D = {}\n",
        cert.k,
        cert.norm_report.norm,
        cert.p,
        cert.epsilon,
        fmt_elem(&cert.zeta),
        fmt_elem(&cert.xi),
        fmt_elem(&cert.d),
    );
    for (name, m) in [("R", &cert.r), ("S", &cert.s), ("Z", &cert.z_reflection)] {
        text += &format!("{name} = {}\n", fmt_mat(m));
    }
    text += &format!("group order {}\n", cert.group_order);
    match (&cert.invariants, &cert.flag_check) {
        (Some(inv), Some(t)) => {
            text += &format!(
                "V = {}  E = {}  F = {}  chi = {}  type ({}, {})  petrie {}  orientable {}\n",
                inv.vertices, inv.edges, inv.faces, inv.euler_char, inv.type_k, inv.type_l, inv.petrie_len, inv.orientable
            );
            text += &format!("self-dual {}  self-Petrie-dual {}\n", t.self_dual, t.self_petrie);
        }
        _ => text += &format!("flag-level checks {}\n", cert.decisions.flag_checks),
    }
    text += &format!(
        "duality witness {}  Petrie witness {}\n",
        cert.duality_witness.is_some(),
        cert.petrie_witness.is_some()
    );
    if let Some(path) = &out {
        text += &format!("certificate written to {}\n", path.display());
    }
    let json = serde_json::from_str(&body).expect("certificate JSON");
    Ok(Outcome { text, json, ok: true })
}

fn cmd_verify(file: &Path, budget: u64) -> Result<Outcome> {
    let cert = read_certificate(file)?;
    let rep = certificate::verify(&cert, budget)?;
    let mut text = String::new();
    for c in &rep.checks {
        let status = if c.passed { "ok  " } else { "FAIL" };
        text += &format!("{status} {}", c.name);
        if !c.detail.is_empty() {
            text += &format!(" ({})", c.detail);
        }
        text.push('\n');
    }
    text += &format!("flag level: {}\n", rep.flag_level);
    text += if rep.passed() { "certificate verified\n" } else { "certificate REJECTED\n" };
    Ok(Outcome { text, json: serde_json::to_value(&rep).unwrap(), ok: rep.passed() })
}

fn cmd_plan(m: u64) -> Result<Outcome> {
    let p = plan::plan(m)?;
    let mut text = format!("m = {} = {} x {}\nbase: {}\n", p.m, p.d, p.n, p.base_certificate_ref);
    if let Some(b) = &p.base {
        text += &format!("base group PSL(2,{}) of order {}\n", b.p, b.group_order);
        if p.n > 1 {
            text += &format!("lift: trinity lift --base <certificate> --n {} (lifted group order {})\n", p.n, b.lifted_order);
        }
    }
    text += &format!("predicted group {}\n", p.predicted_group);
    Ok(Outcome { text, json: serde_json::to_value(&p).unwrap(), ok: true })
}

fn cmd_lift(args: LiftArgs) -> Result<Outcome> {
    if args.n % 2 == 0 || args.n < 3 {
        return Err(Error::InvalidInput(format!("n = {} must be odd and at least 3", args.n)));
    }
    let (label, base) = match (&args.base, &args.toy) {
        (Some(path), _) => {
            let cert = read_certificate(path)?;
            (format!("k = {} over GF({})", cert.k, cert.p), cert.regular_map(DEFAULT_GROUP_BUDGET)?)
        }
        (None, Some(name)) => (format!("toy {name}"), toys::by_name(name)?),
        (None, None) => unreachable!("clap requires a source"),
    };
    let cv = CornerVoltage::assign(&base, args.n)?;
    let inv = base.invariants();
    let n = args.n as u64;
    match args.mode {
        Mode::Exhaustive => {
            let rep = lift::component_bfs(&base, &cv, args.budget)?;
            let ci = &rep.invariants;
            let text = format!(
                "base {label}: {} flags, type ({}, {})\n\
                 lifted flags {}  components {} of size {} (homogeneous {})\n\
                 predicted components {} (match {})\n\
                 component: V = {}  E = {}  F = {}  type ({}, {})  petrie {}  orientable {}\n\
                 regular {}  self-dual {}  self-Petrie-dual {}\n\
                 translation group order {}  predicted group order {}  semidirect structure {}\n",
                rep.base_flags,
                inv.type_k,
                inv.type_l,
                rep.total_flags,
                rep.component_count,
                rep.size,
                rep.homogeneous,
                rep.predicted_count,
                rep.count_matches_prediction(),
                ci.vertices,
                ci.edges,
                ci.faces,
                ci.type_k,
                ci.type_l,
                ci.petrie_len,
                ci.orientable,
                rep.regular,
                rep.trinity.self_dual,
                rep.trinity.self_petrie,
                rep.translation_group_order,
                rep.group_order_predicted,
                rep.semidirect_certified,
            );
            Ok(Outcome { text, json: serde_json::to_value(&rep).unwrap(), ok: true })
        }
        Mode::Orbit => {
            let rep = lift::orbit_report(&base, &cv)?;
            let expected = [n * inv.type_k, n * inv.type_l, 2, n * inv.petrie_len];
            let got = [rep.yz, rep.zx, rep.xy, rep.xyz];
            let mut text = format!("base {label}: {} flags, n = {n}\n", base.flag_count());
            for ((word, g), e) in ["yz", "zx", "xy", "xyz"].iter().zip(got).zip(expected) {
                let mark = if g == e { "" } else { "  (differs)" };
                text += &format!("ord({word}) = {g}  expected {e}{mark}\n");
            }
            let json = json!({ "orders": rep, "expected": { "yz": expected[0], "zx": expected[1], "xy": expected[2], "xyz": expected[3] } });
            Ok(Outcome { text, json, ok: true })
        }
    }
}

fn cmd_export(file: &Path, dot: &Path, budget: u64) -> Result<Outcome> {
    let cert = read_certificate(file)?;
    let map: RegularMap = cert.regular_map(budget)?;
    write_file(dot, &map.to_dot())?;
    let text = format!("wrote {} flags to {}\n", map.flag_count(), dot.display());
    Ok(Outcome { text, json: json!({ "flags": map.flag_count(), "dot": dot.display().to_string() }), ok: true })
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Table(args) => cmd_table(args),
        Command::Construct { k, prime, out, budget } => cmd_construct(k, prime, out, budget),
        Command::Verify { file, budget } => cmd_verify(&file, budget),
        Command::Plan { m } => cmd_plan(m),
        Command::Lift(args) => cmd_lift(args),
        Command::ExportFlaggraph { file, dot, budget } => cmd_export(&file, &dot, budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            if json {
                println!("{}", serde_json::to_string_pretty(&out.json).unwrap());
            } else {
                print!("{}", out.text);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            if json {
                println!("{}", json!({ "error": e.to_string(), "exit_code": e.exit_code() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
