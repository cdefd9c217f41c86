use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use freefield::als::{Als, AlsJson};
use freefield::eval::eval_to_als;
use freefield::factor::{
    factorize, is_atom, left_divides, right_divides, DivisibilityResult, FactorConfig, WitnessTree,
};
use freefield::minimize::{invert, minimize_seeded, type_of_minimal, DEFAULT_SEED};
use freefield::qlinalg::format_rational;
use freefield::{Error, Expr};

#[derive(Parser)]
#[command(name = "freefield", version, about = "Exact computations with noncommutative rational functions")]
struct Cli {
    /// Comma separated letter names.
    #[arg(long, global = true, default_value = "x,y,z")]
    letters: String,
    /// Machine readable output.
    #[arg(long, global = true)]
    json: bool,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Maximum number of S-pairs per Gröbner basis.
    #[arg(long, global = true)]
    budget_pairs: Option<usize>,
    /// Maximum number of tentative assignments when extracting a solution.
    #[arg(long, global = true)]
    budget_specializations: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Side {
    Left,
    Right,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimension of a minimal linear representation.
    Rank { expr: String },
    /// Minimal admissible linear system.
    Minimize {
        expr: String,
        /// Also write the system as JSON to this file.
        #[arg(long = "json-out", value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Power series expansion at the origin.
    Series {
        expr: String,
        #[arg(long, default_value_t = 4)]
        order: usize,
    },
    /// Type of a minimal system, written (right,left).
    Type { expr: String },
    /// Minimal system of the inverse.
    Invert { expr: String },
    /// Factorization into atoms.
    Factor {
        expr: String,
        /// Refuse elements of larger rank.
        #[arg(long)]
        max_rank_budget: Option<usize>,
    },
    /// Whether the element admits no proper factorization.
    IsAtom { expr: String },
    /// Whether the first element divides the second.
    Divides {
        divisor: String,
        element: String,
        #[arg(long, value_enum, default_value = "left")]
        side: Side,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Systems stored as JSON files.
    #[command(subcommand)]
    Als(AlsCmd),
}

#[derive(Subcommand)]
enum AlsCmd {
    /// Read a system and report its dimension and rank.
    Load { file: PathBuf },
    /// Write the minimal system of an expression.
    Save { file: PathBuf, expr: String },
    /// Print a stored system.
    Show { file: PathBuf },
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 4,
            Failure::Lib(Error::Parse { .. } | Error::Json(_)) => 4,
            Failure::Lib(Error::BudgetExceeded(_)) => 3,
            Failure::Lib(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

type Outcome = std::result::Result<u8, Failure>;

struct Ctx {
    letters: Vec<String>,
    json: bool,
    seed: u64,
    cfg: FactorConfig,
}

impl Ctx {
    fn parse(&self, text: &str) -> std::result::Result<Als, Failure> {
        let e = Expr::parse(text, &self.letters)?;
        Ok(minimize_seeded(&eval_to_als(&e, self.letters.len(), false)?, self.seed)?)
    }

    fn als_json(&self, f: &Als) -> std::result::Result<Value, Failure> {
        let j = AlsJson::from_als(f, &self.letters)?;
        Ok(serde_json::to_value(j).expect("serializable"))
    }

    fn emit(&self, human: impl FnOnce() -> String, machine: impl FnOnce() -> Value) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&machine()).expect("serializable"));
        } else {
            print!("{}", human());
        }
    }
}

fn read_als(path: &PathBuf) -> std::result::Result<(AlsJson, Als), Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let j = AlsJson::parse(&text)?;
    let f = j.to_als()?;
    Ok((j, f))
}

fn tree_json(t: &WitnessTree) -> Value {
    match t {
        WitnessTree::Leaf(i) => json!(i),
        WitnessTree::Node(a, b) => json!([tree_json(a), tree_json(b)]),
    }
}

fn tree_string(t: &WitnessTree) -> String {
    match t {
        WitnessTree::Leaf(i) => format!("f{}", i + 1),
        WitnessTree::Node(a, b) => format!("({} {})", tree_string(a), tree_string(b)),
    }
}

fn run(cli: Cli) -> Outcome {
    let letters: Vec<String> = cli.letters.split(',').map(|s| s.trim().to_string()).collect();
    if letters.iter().any(|l| l.is_empty()) {
        return Err(Failure::Usage("empty letter name".into()));
    }
    let mut cfg = FactorConfig { seed: cli.seed, ..FactorConfig::default() };
    if let Some(p) = cli.budget_pairs {
        cfg.groebner.max_pairs = p;
    }
    if let Some(s) = cli.budget_specializations {
        cfg.solve.max_specializations = s;
    }
    let ctx = Ctx { letters, json: cli.json, seed: cli.seed, cfg };

    match cli.cmd {
        Cmd::Rank { expr } => {
            let f = ctx.parse(&expr)?;
            ctx.emit(|| format!("{}\n", f.dim()), || json!({ "rank": f.dim() }));
        }
        Cmd::Minimize { expr, out } => {
            let f = ctx.parse(&expr)?;
            let j = ctx.als_json(&f)?;
            if let Some(path) = out {
                let text = serde_json::to_string_pretty(&j).expect("serializable");
                std::fs::write(&path, text + "\n").map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            }
            ctx.emit(|| f.display(&ctx.letters), || j);
        }
        Cmd::Series { expr, order } => {
            let f = ctx.parse(&expr)?;
            let s = f.series_expand(order)?;
            let terms: serde_json::Map<String, Value> = s
                .terms()
                .iter()
                .map(|(w, c)| (w.display(&ctx.letters), json!(format_rational(c))))
                .collect();
            ctx.emit(|| format!("{}\n", s.display(&ctx.letters)), || json!({ "order": order, "terms": terms }));
        }
        Cmd::Type { expr } => {
            let f = ctx.parse(&expr)?;
            if f.dim() == 0 {
                return Err(Error::Unsupported("the zero element has no type".into()).into());
            }
            let t = type_of_minimal(&f)?;
            ctx.emit(
                || format!("{t}\n"),
                || json!({ "right_flag": t.right_flag, "left_flag": t.left_flag }),
            );
        }
        Cmd::Invert { expr } => {
            let f = ctx.parse(&expr)?;
            let g = minimize_seeded(&invert(&f)?, ctx.seed)?;
            let j = ctx.als_json(&g)?;
            ctx.emit(|| g.display(&ctx.letters), || j);
        }
        Cmd::Factor { expr, max_rank_budget } => {
            let f = ctx.parse(&expr)?;
            if let Some(m) = max_rank_budget {
                if f.dim() > m {
                    return Err(Error::BudgetExceeded(format!("rank {} exceeds {m}", f.dim())).into());
                }
            }
            let fz = factorize(&f, &ctx.cfg)?;
            let factors = fz.factors.iter().map(|g| ctx.als_json(g)).collect::<std::result::Result<Vec<_>, _>>()?;
            ctx.emit(
                || {
                    let mut s = format!("unit {}\n", format_rational(&fz.unit));
                    for (i, g) in fz.factors.iter().enumerate() {
                        s.push_str(&format!("atom {} (rank {})\n{}", i + 1, g.dim(), g.display(&ctx.letters)));
                    }
                    if fz.incomplete {
                        s.push_str("incomplete: some factor could not be shown to be an atom\n");
                    }
                    s
                },
                || json!({ "unit": format_rational(&fz.unit), "factors": factors, "incomplete": fz.incomplete }),
            );
        }
        Cmd::IsAtom { expr } => {
            let f = ctx.parse(&expr)?;
            let r = is_atom(&f, &ctx.cfg)?;
            ctx.emit(
                || {
                    let word = if r.atom { "atom" } else { "not an atom" };
                    if r.incomplete { format!("{word} (search incomplete)\n") } else { format!("{word}\n") }
                },
                || json!({ "atom": r.atom, "incomplete": r.incomplete }),
            );
            return Ok(if r.atom { 0 } else { 1 });
        }
        Cmd::Divides { divisor, element, side, depth } => {
            let (g, f) = (ctx.parse(&divisor)?, ctx.parse(&element)?);
            let mut cfg = ctx.cfg.clone();
            if let Some(d) = depth {
                cfg.depth = d;
            }
            let r: DivisibilityResult = match side {
                Side::Left => left_divides(&g, &f, &cfg)?,
                Side::Right => right_divides(&g, &f, &cfg)?,
            };
            let found = r.witness.is_some();
            let leaves = match &r.witness {
                Some(w) => w.leaves.iter().map(|l| ctx.als_json(l)).collect::<std::result::Result<Vec<_>, _>>()?,
                None => Vec::new(),
            };
            ctx.emit(
                || match &r.witness {
                    Some(w) => {
                        let mut s = format!("divides; tree {}; divisor is {} leaf(s)\n", tree_string(&w.tree), w.count);
                        for (i, l) in w.leaves.iter().enumerate() {
                            s.push_str(&format!("f{} (rank {})\n{}", i + 1, l.dim(), l.display(&ctx.letters)));
                        }
                        s
                    }
                    None if r.incomplete => "no witness found (search incomplete)\n".into(),
                    None => "does not divide\n".into(),
                },
                || {
                    let w = r.witness.as_ref();
                    json!({
                        "divides": found,
                        "incomplete": r.incomplete,
                        "leaves": leaves,
                        "tree": w.map(|w| tree_json(&w.tree)),
                        "count": w.map(|w| w.count),
                    })
                },
            );
            return Ok(if found { 0 } else { 1 });
        }
        Cmd::Als(AlsCmd::Load { file }) => {
            let (j, f) = read_als(&file)?;
            let r = minimize_seeded(&f, ctx.seed)?.dim();
            ctx.emit(
                || format!("dimension {} rank {} letters {}\n", f.dim(), r, j.letters.join(",")),
                || json!({ "dim": f.dim(), "rank": r, "letters": j.letters }),
            );
        }
        Cmd::Als(AlsCmd::Save { file, expr }) => {
            let f = ctx.parse(&expr)?;
            let j = ctx.als_json(&f)?;
            let text = serde_json::to_string_pretty(&j).expect("serializable");
            std::fs::write(&file, text + "\n").map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
            ctx.emit(|| format!("wrote {} (dimension {})\n", file.display(), f.dim()), || json!({ "dim": f.dim() }));
        }
        Cmd::Als(AlsCmd::Show { file }) => {
            let (j, f) = read_als(&file)?;
            ctx.emit(|| f.display(&j.letters), || serde_json::to_value(&j).expect("serializable"));
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { 4 } else { 0 };
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
