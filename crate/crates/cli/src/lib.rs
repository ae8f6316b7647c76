//! The `autrel` command line: subcommands, file formats and exit codes.
//!
//! Every command renders its whole output into a string first, so a failing
//! command never leaves partial output on standard output. Exit codes: 0 ok,
//! 2 parse or input error, 3 budget exceeded, 4 semantic precondition
//! violated.

pub mod error;
pub mod formats;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use autrel::buchi::{
    build_formula, etiling_prime_witness, etiling_witness, eval_bounded, eval_with_witness,
    format_env, parse_env, prefix_shape, Params,
};
use autrel::convolution::{
    convolve, decide_forall_nonempty, deconvolve, project_exists, project_forall, Budget, Mode,
    RelationAutomaton, TupleWord,
};
use autrel::nfa::Nfa;
use autrel::ops::{
    complement, complement_bounded, concat, intersect, inverse_hom, regex_to_nfa, relabel_map,
    union,
};
use autrel::symbol::{show_word, Alphabet, Symbol, Word};
use autrel::tiling::{
    build_reduction, check_tiling, condition_automata, counter_instance, encode_tiling,
    enumerate_tilings_with, rho_forall_member, solve_corridor_with, tag_dispatch, Checker,
    CorridorInstance, SigmaI, Tiling, ROW_BUDGET,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

pub use error::CliError;
use formats::*;

#[derive(Parser, Debug)]
#[command(name = "autrel", version, about = "Automatic relations at desk scale")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Regular expressions
    #[command(subcommand)]
    Regex(RegexCmd),
    /// Automaton operations
    #[command(subcommand)]
    Nfa(NfaCmd),
    /// Convolution and projections
    #[command(subcommand)]
    Conv(ConvCmd),
    /// Corridor tilings and the reduction
    #[command(subcommand)]
    Tiling(TilingCmd),
    /// Buchi arithmetic formulas
    #[command(subcommand)]
    Buchi(BuchiCmd),
}

#[derive(Subcommand, Debug)]
pub enum RegexCmd {
    /// Compiles an expression file to an automaton
    Compile {
        expr: PathBuf,
        #[arg(long)]
        alphabet: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum NfaCmd {
    Union {
        a: PathBuf,
        b: PathBuf,
    },
    Concat {
        a: PathBuf,
        b: PathBuf,
    },
    Intersect {
        a: PathBuf,
        b: PathBuf,
    },
    Complement {
        a: PathBuf,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Inverse image under a letter map from new letters to old ones
    Invhom {
        a: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Image under a letter map; the new alphabet is the set of images
    Relabel {
        a: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Prints EMPTY or NONEMPTY
    Empty {
        a: PathBuf,
    },
    /// Prints the shortest, then least, accepted word or NONE
    Shortest {
        a: PathBuf,
    },
    /// Prints ACCEPT or REJECT
    Accepts {
        a: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Naive,
    Onthefly,
}

#[derive(Args, Debug)]
pub struct RelationArgs {
    a: PathBuf,
    /// Number of leading components kept
    #[arg(long)]
    d: usize,
    /// Limit on automaton states and search nodes
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Subcommand, Debug)]
pub enum ConvCmd {
    /// Convolves words given as space-separated atoms
    Convolve {
        words: Vec<String>,
    },
    /// Splits a word of tuple letters into its components
    Deconvolve {
        word: String,
    },
    ProjectExists(RelationArgs),
    ProjectForall(RelationArgs),
    /// Prints EMPTY or NONEMPTY <witness>, then intermediate sizes
    DecideForall {
        #[command(flatten)]
        rel: RelationArgs,
        #[arg(long, value_enum)]
        mode: ModeArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum TilingCmd {
    /// Prints one valid tiling or NONE
    Solve {
        inst: PathBuf,
        #[arg(long)]
        width: Option<usize>,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Prints every valid tiling up to a height
    Enumerate {
        inst: PathBuf,
        #[arg(long)]
        width: Option<usize>,
        #[arg(long)]
        max_height: usize,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Prints VALID or INVALID <reason>
    Check { inst: PathBuf, tiling: PathBuf },
    /// Prints the word encoding a tiling of width 2^n
    Encode { inst: PathBuf, tiling: PathBuf },
    /// Checks a word against the six conditions
    Conds {
        inst: PathBuf,
        /// File holding the word as space-separated letters
        word: PathBuf,
        /// Also decide membership through the automaton construction
        #[arg(long)]
        automaton: bool,
    },
    /// Builds the reduction automaton; sizes go to stdout with --out,
    /// to stderr otherwise
    Reduce {
        inst: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prints the binary counter instance of a width
    Counter {
        #[arg(long)]
        width: usize,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FormulaArgs {
    name: String,
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Tuple length for NumAt and MaxNum
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Ruler length; taken from the instance when one is given
    #[arg(long)]
    n: Option<usize>,
    /// Replace BitAt and NumAt by oracle leaves
    #[arg(long)]
    opaque: bool,
    /// Tiling instance for the tile predicates
    #[arg(long)]
    instance: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum BuchiCmd {
    /// Prints a formula
    Build(FormulaArgs),
    /// Evaluates with every quantifier ranging over 0..=bound
    EvalBounded {
        #[command(flatten)]
        f: FormulaArgs,
        #[arg(long)]
        bound: String,
        #[arg(long, default_value = "")]
        env: String,
    },
    /// Evaluates the body of a formula under values of its leading
    /// existential variables
    EvalWitness {
        #[command(flatten)]
        f: FormulaArgs,
        #[arg(long)]
        bound: String,
        #[arg(long)]
        env: String,
    },
    /// Prints the quantifier pattern of the prenex form
    Prefix(FormulaArgs),
    /// Prints the ETiling witness of a tiling
    Witness {
        inst: PathBuf,
        tiling: PathBuf,
        /// Witness of the comb-ruler variant
        #[arg(long)]
        prime: bool,
    },
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn nfa_at(path: &Path) -> Result<Nfa, CliError> {
    parse_nfa(&read(path)?)
}

fn instance_at(path: &Path) -> Result<CorridorInstance, CliError> {
    parse_instance(&read(path)?)
}

fn budget(b: Option<usize>) -> Budget {
    b.map_or_else(Budget::default, |n| Budget {
        max_states: n,
        max_nodes: n,
    })
}

fn relation(r: &RelationArgs) -> Result<(RelationAutomaton, Budget), CliError> {
    let a = nfa_at(&r.a)?;
    let arity = a.alphabet().arity();
    if r.d == 0 || r.d > arity {
        return Err(CliError::Precondition(format!("d must be in 1..={arity}")));
    }
    Ok((
        RelationAutomaton::new(a, r.d, arity - r.d)?,
        budget(r.budget),
    ))
}

fn bool_word(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

fn show_witness(w: &[Symbol]) -> String {
    if w.is_empty() {
        "ε".to_string()
    } else {
        show_word(w)
    }
}

fn big(text: &str) -> Result<BigUint, CliError> {
    text.parse().map_err(|_| CliError::Parse {
        line: 0,
        reason: format!("bad natural {text}"),
    })
}

fn formula_params(f: &FormulaArgs) -> Result<Params, CliError> {
    let instance = f.instance.as_deref().map(instance_at).transpose()?;
    let n = match (f.n, &instance) {
        (Some(n), _) => n,
        (None, Some(i)) => i.n as usize,
        (None, None) => 1,
    };
    if n > MAX_N as usize {
        return Err(CliError::Precondition(format!("n must be at most {MAX_N}")));
    }
    Ok(Params {
        p: f.p,
        k: f.k,
        n,
        opaque: f.opaque,
        instance,
    })
}

fn write_tiling(out: &mut String, t: &Tiling) {
    write!(out, "{t}").unwrap();
}

pub fn run(cli: Cli) -> Result<String, CliError> {
    let mut out = String::new();
    match cli.command {
        Command::Regex(RegexCmd::Compile { expr, alphabet }) => {
            let sigma = parse_alphabet(&read(&alphabet)?)?;
            let e = parse_regex(&read(&expr)?, &sigma)?;
            out = serialize_nfa(&regex_to_nfa(&e, &sigma)?);
        }
        Command::Nfa(cmd) => out = nfa_command(cmd)?,
        Command::Conv(cmd) => out = conv_command(cmd)?,
        Command::Tiling(cmd) => out = tiling_command(cmd)?,
        Command::Buchi(cmd) => match cmd {
            BuchiCmd::Build(f) => {
                writeln!(out, "{}", build_formula(&f.name, &formula_params(&f)?)?).unwrap();
            }
            BuchiCmd::Prefix(f) => {
                writeln!(
                    out,
                    "{}",
                    prefix_shape(&build_formula(&f.name, &formula_params(&f)?)?)
                )
                .unwrap();
            }
            BuchiCmd::EvalBounded { f, bound, env } => {
                let formula = build_formula(&f.name, &formula_params(&f)?)?;
                let v = eval_bounded(&formula, &parse_env(&env)?, &big(&bound)?)?;
                writeln!(out, "{}", if v { "TRUE" } else { "FALSE" }).unwrap();
            }
            BuchiCmd::EvalWitness { f, bound, env } => {
                let formula = build_formula(&f.name, &formula_params(&f)?)?;
                let v = eval_with_witness(&formula, &parse_env(&env)?, &big(&bound)?)?;
                writeln!(out, "{}", if v { "TRUE" } else { "FALSE" }).unwrap();
            }
            BuchiCmd::Witness {
                inst,
                tiling,
                prime,
            } => {
                let inst = instance_at(&inst)?;
                let t = parse_tiling(&read(&tiling)?)?;
                let w = if prime {
                    etiling_prime_witness(&inst, &t)?
                } else {
                    etiling_witness(2, &inst, &t)?
                };
                writeln!(out, "{}", format_env(&w)).unwrap();
            }
        },
    }
    Ok(out)
}

fn nfa_command(cmd: NfaCmd) -> Result<String, CliError> {
    let mut out = String::new();
    match cmd {
        NfaCmd::Union { a, b } => out = serialize_nfa(&union(&nfa_at(&a)?, &nfa_at(&b)?)?),
        NfaCmd::Concat { a, b } => out = serialize_nfa(&concat(&nfa_at(&a)?, &nfa_at(&b)?)?),
        NfaCmd::Intersect { a, b } => out = serialize_nfa(&intersect(&nfa_at(&a)?, &nfa_at(&b)?)?),
        NfaCmd::Complement { a, budget } => {
            let a = nfa_at(&a)?;
            let c = match budget {
                Some(n) => complement_bounded(&a, n)?,
                None => complement(&a),
            };
            out = serialize_nfa(&c);
        }
        NfaCmd::Invhom { a, map } => {
            out = serialize_nfa(&inverse_hom(&nfa_at(&a)?, &parse_map(&read(&map)?)?)?)
        }
        NfaCmd::Relabel { a, map } => {
            let h = parse_map(&read(&map)?)?;
            let gamma = Alphabet::new(h.values().cloned())?;
            out = serialize_nfa(&relabel_map(&nfa_at(&a)?, &gamma, &h)?);
        }
        NfaCmd::Empty { a } => {
            let e = nfa_at(&a)?.is_empty();
            writeln!(out, "{}", if e { "EMPTY" } else { "NONEMPTY" }).unwrap();
        }
        NfaCmd::Shortest { a } => match nfa_at(&a)?.shortest_accepted() {
            Some(w) => writeln!(out, "{}", show_witness(&w)).unwrap(),
            None => writeln!(out, "NONE").unwrap(),
        },
        NfaCmd::Accepts { a, word } => {
            let ok = nfa_at(&a)?.accepts(&parse_word(&word)?)?;
            writeln!(out, "{}", if ok { "ACCEPT" } else { "REJECT" }).unwrap();
        }
    }
    Ok(out)
}

fn conv_command(cmd: ConvCmd) -> Result<String, CliError> {
    let mut out = String::new();
    match cmd {
        ConvCmd::Convolve { words } => {
            let ws: Vec<Word> = words
                .iter()
                .map(|w| parse_word(w))
                .collect::<Result<_, _>>()?;
            if ws.is_empty() {
                return Err(CliError::Precondition("nothing to convolve".into()));
            }
            writeln!(out, "{}", show_word(&convolve(&ws)?.letters)).unwrap();
        }
        ConvCmd::Deconvolve { word } => {
            let letters = parse_word(&word)?;
            let arity = letters.first().map_or(0, Symbol::arity);
            for w in deconvolve(&TupleWord { arity, letters })? {
                writeln!(out, "{}", show_word(&w)).unwrap();
            }
        }
        ConvCmd::ProjectExists(r) => {
            let (rel, _) = relation(&r)?;
            out = serialize_nfa(&project_exists(&rel));
        }
        ConvCmd::ProjectForall(r) => {
            let (rel, b) = relation(&r)?;
            out = serialize_nfa(&project_forall(&rel, b)?);
        }
        ConvCmd::DecideForall { rel, mode } => {
            let (r, b) = relation(&rel)?;
            let mode = match mode {
                ModeArg::Naive => Mode::Naive,
                ModeArg::Onthefly => Mode::OnTheFly,
            };
            let v = decide_forall_nonempty(&r, mode, b)?;
            match &v.witness {
                Some(w) => writeln!(out, "NONEMPTY {}", show_witness(w)).unwrap(),
                None => writeln!(out, "EMPTY").unwrap(),
            }
            for (name, n) in &v.stats {
                writeln!(out, "size {name} {n}").unwrap();
            }
        }
    }
    Ok(out)
}

fn tiling_command(cmd: TilingCmd) -> Result<String, CliError> {
    let mut out = String::new();
    match cmd {
        TilingCmd::Solve {
            inst,
            width,
            budget,
        } => {
            let inst = instance_at(&inst)?;
            let w = width.unwrap_or_else(|| inst.width());
            match solve_corridor_with(&inst, w, budget.unwrap_or(ROW_BUDGET))? {
                Some(t) => write_tiling(&mut out, &t),
                None => writeln!(out, "NONE").unwrap(),
            }
        }
        TilingCmd::Enumerate {
            inst,
            width,
            max_height,
            budget,
        } => {
            let inst = instance_at(&inst)?;
            let w = width.unwrap_or_else(|| inst.width());
            let ts = enumerate_tilings_with(&inst, w, max_height, budget.unwrap_or(ROW_BUDGET))?;
            writeln!(out, "count {}", ts.len()).unwrap();
            for (i, t) in ts.iter().enumerate() {
                writeln!(out, "tiling {} rows {}", i + 1, t.height()).unwrap();
                write_tiling(&mut out, t);
            }
        }
        TilingCmd::Check { inst, tiling } => {
            let inst = instance_at(&inst)?;
            let t = parse_tiling(&read(&tiling)?)?;
            match check_tiling(&inst, &t) {
                None => writeln!(out, "VALID").unwrap(),
                Some(v) => writeln!(out, "INVALID {v}").unwrap(),
            }
        }
        TilingCmd::Encode { inst, tiling } => {
            let inst = instance_at(&inst)?;
            let t = parse_tiling(&read(&tiling)?)?;
            writeln!(out, "{}", show_word(&encode_tiling(&inst, &t)?)).unwrap();
        }
        TilingCmd::Conds {
            inst,
            word,
            automaton,
        } => {
            let inst = instance_at(&inst)?;
            let w = parse_word(&read(&word)?)?;
            let checker = Checker::new(&inst)?;
            for i in 1..=6 {
                writeln!(out, "cond {i} {}", bool_word(checker.check(i, &w)?)).unwrap();
            }
            writeln!(out, "in_LI {}", bool_word(checker.in_li(&w)?)).unwrap();
            if automaton {
                let (_, _, conds) = condition_automata(&inst)?;
                let a_prime = tag_dispatch(&SigmaI::of(&inst), &conds);
                writeln!(
                    out,
                    "rho_forall {}",
                    bool_word(rho_forall_member(&w, &a_prime))
                )
                .unwrap();
            }
        }
        TilingCmd::Reduce { inst, out: path } => {
            let red = build_reduction(&instance_at(&inst)?)?;
            let mut report = String::new();
            for (name, states, trans) in red.report() {
                writeln!(report, "size {name} states {states} transitions {trans}").unwrap();
            }
            let text = serialize_nfa(&red.a_i);
            match path {
                Some(p) => {
                    std::fs::write(&p, text)
                        .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                    out = report;
                }
                None => {
                    eprint!("{report}");
                    out = text;
                }
            }
        }
        TilingCmd::Counter { width } => {
            if !(3..=1 << 16).contains(&width) {
                return Err(CliError::Precondition(
                    "counter width must be in 3..=65536".into(),
                ));
            }
            out = serialize_instance(&counter_instance(width));
        }
    }
    Ok(out)
}
