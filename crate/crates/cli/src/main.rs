use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use cocycle_core::cocycle::{ck_word_weight, gauge_weight, in_cocycle_group, rho};
use cocycle_core::coe::{psi, pullback_map, CoeMap};
use cocycle_core::conjugacy::{commutant_witness, witness_non_conjugacy, DEFAULT_MAX_DEPTH, DEFAULT_MAX_LEVEL};
use cocycle_core::format::{parse_coe_file, parse_function, parse_matrix_grid, parse_point, parse_table, parse_word};
use cocycle_core::sft::TransitionMatrix;
use cocycle_core::{selftest, Error, LocFun, TableElement};

/// Exact computations with full groups and cocycles of one-sided Markov shifts.
///
/// Exit codes: 0 success or true, 1 property false or witness found,
/// 2 input error, 3 search budget exceeded.
#[derive(Parser)]
#[command(name = "cocycle", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a matrix is square, 0/1, irreducible and not a permutation
    Validate { matrix: PathBuf },
    /// List the admissible words of a given length
    Words { matrix: PathBuf, length: usize },
    /// Operations on full-group tables
    Table {
        #[command(subcommand)]
        op: TableOp,
    },
    /// The cocycle rho^f(., tau)
    Rho {
        matrix: PathBuf,
        function: PathBuf,
        table: PathBuf,
    },
    /// Decide whether tau lies in Gamma_{A,f}
    Member {
        matrix: PathBuf,
        function: PathBuf,
        table: PathBuf,
    },
    /// Gauge weight of a table, or the weight of a word with --word
    Weight {
        matrix: PathBuf,
        function: PathBuf,
        table: Option<PathBuf>,
        #[arg(long)]
        word: Option<String>,
    },
    /// The transfer Psi_h(g) of a function on the target
    Psi { coe: PathBuf, function: PathBuf },
    /// The pullback g o h of a function on the target
    Pullback { coe: PathBuf, function: PathBuf },
    /// Decide whether an orbit equivalence is a conjugacy, with a witness if not
    Conjugacy {
        coe: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
        max_depth: usize,
    },
    /// Find a table that does not commute with a self orbit equivalence
    Commutant {
        coe: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_LEVEL)]
        max_level: usize,
    },
    /// Run the seeded property battery
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
    },
}

#[derive(Subcommand)]
enum TableOp {
    /// Validate a table and print its canonical form
    Check { matrix: PathBuf, table: PathBuf },
    /// Print OUTER o INNER
    Compose {
        matrix: PathBuf,
        outer: PathBuf,
        inner: PathBuf,
    },
    /// Print the inverse table
    Invert { matrix: PathBuf, table: PathBuf },
    /// Apply a table to a point literal u|w
    Apply {
        matrix: PathBuf,
        table: PathBuf,
        point: String,
    },
}

/// Objects loaded during one invocation, keyed by file path.
#[derive(Default)]
struct Session {
    matrices: BTreeMap<PathBuf, TransitionMatrix>,
    functions: BTreeMap<PathBuf, LocFun>,
    tables: BTreeMap<PathBuf, TableElement>,
    maps: BTreeMap<PathBuf, CoeMap>,
}

enum Failure {
    Input(String),
    Other(i32, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(u8, String), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", path.display()))
}

impl Session {
    fn matrix(&mut self, path: &Path) -> Result<TransitionMatrix, Failure> {
        if let Some(a) = self.matrices.get(path) {
            return Ok(a.clone());
        }
        let grid = parse_matrix_grid(&read(path)?).map_err(in_file(path))?;
        let a = TransitionMatrix::new(&grid).map_err(in_file(path))?;
        self.matrices.insert(path.to_path_buf(), a.clone());
        Ok(a)
    }

    fn function(&mut self, a: &TransitionMatrix, path: &Path) -> Result<LocFun, Failure> {
        if let Some(f) = self.functions.get(path).filter(|f| f.matrix() == a) {
            return Ok(f.clone());
        }
        let f = parse_function(a, &read(path)?).map_err(in_file(path))?;
        self.functions.insert(path.to_path_buf(), f.clone());
        Ok(f)
    }

    fn table(&mut self, a: &TransitionMatrix, path: &Path) -> Result<TableElement, Failure> {
        if let Some(t) = self.tables.get(path).filter(|t| t.matrix() == a) {
            return Ok(t.clone());
        }
        let t = parse_table(a, &read(path)?).map_err(in_file(path))?;
        self.tables.insert(path.to_path_buf(), t.clone());
        Ok(t)
    }

    fn coe(&mut self, path: &Path) -> Result<CoeMap, Failure> {
        if let Some(h) = self.maps.get(path) {
            return Ok(h.clone());
        }
        let h = parse_coe_file(path).map_err(in_file(path))?;
        self.maps.insert(path.to_path_buf(), h.clone());
        Ok(h)
    }

    fn run(&mut self, command: Command) -> Outcome {
        match command {
            Command::Validate { matrix } => {
                let grid = parse_matrix_grid(&read(&matrix)?).map_err(in_file(&matrix))?;
                match TransitionMatrix::new(&grid) {
                    Ok(a) => Ok((0, format!("OK irreducible non-permutation n={}\n", a.size()))),
                    Err(e) => Ok((1, format!("INVALID {e}\n"))),
                }
            }
            Command::Words { matrix, length } => {
                let a = self.matrix(&matrix)?;
                let mut out = String::new();
                for w in a.words(length) {
                    writeln!(out, "{w}").unwrap();
                }
                Ok((0, out))
            }
            Command::Table { op } => self.table_op(op),
            Command::Rho {
                matrix,
                function,
                table,
            } => {
                let a = self.matrix(&matrix)?;
                let (f, t) = (self.function(&a, &function)?, self.table(&a, &table)?);
                Ok((0, rho(&f, &t).to_string()))
            }
            Command::Member {
                matrix,
                function,
                table,
            } => {
                let a = self.matrix(&matrix)?;
                let (f, t) = (self.function(&a, &function)?, self.table(&a, &table)?);
                if in_cocycle_group(&t, &f) {
                    return Ok((0, "MEMBER Gamma_{A,f}\n".into()));
                }
                let (what, locus) = if f == LocFun::constant(&a, 1) {
                    ("d", t.cocycle_data().d.first_nonzero().cloned())
                } else {
                    ("rho", rho(&f, &t).first_nonzero().cloned())
                };
                let locus = locus.expect("non-member has a nonzero part");
                Ok((1, format!("NOT-MEMBER Gamma_{{A,f}}; {what} nonzero on {locus}\n")))
            }
            Command::Weight {
                matrix,
                function,
                table,
                word,
            } => {
                let a = self.matrix(&matrix)?;
                let f = self.function(&a, &function)?;
                match (table, word) {
                    (Some(t), None) => {
                        let t = self.table(&a, &t)?;
                        Ok((0, gauge_weight(&t, &f).to_string()))
                    }
                    (None, Some(w)) => {
                        let mu = parse_word(Some(&a), 0, &w)?;
                        Ok((0, ck_word_weight(&mu, &f).to_string()))
                    }
                    _ => Err(Failure::Input("give exactly one of a table file or --word".into())),
                }
            }
            Command::Psi { coe, function } => {
                let h = self.coe(&coe)?;
                let g = self.function(&h.target().clone(), &function)?;
                Ok((0, psi(&h, &g).to_string()))
            }
            Command::Pullback { coe, function } => {
                let h = self.coe(&coe)?;
                let g = self.function(&h.target().clone(), &function)?;
                Ok((0, pullback_map(&g, &h).to_string()))
            }
            Command::Conjugacy {
                coe,
                max_level,
                max_depth,
            } => {
                let h = self.coe(&coe)?;
                match witness_non_conjugacy(&h, max_level, max_depth) {
                    Ok(None) => Ok((0, "CONJUGACY\n".into())),
                    Ok(Some(w)) => {
                        let mut out = String::from("WITNESS\n");
                        writeln!(out, "z {}", w.z).unwrap();
                        write!(out, "{}{}", w.g, w.tau0).unwrap();
                        writeln!(out, "level {}", w.recode_level).unwrap();
                        Ok((1, out))
                    }
                    Err(Error::SearchBudgetExceeded { max_level, max_depth }) => Ok((
                        3,
                        format!("SEARCH-BUDGET max-level={max_level} max-depth={max_depth}\n"),
                    )),
                    Err(e) => Err(Failure::Other(1, e.to_string())),
                }
            }
            Command::Commutant { coe, max_level } => {
                let h = self.coe(&coe)?;
                match commutant_witness(&h, max_level) {
                    Ok(None) => Ok((0, "IDENTITY\n".into())),
                    Ok(Some(c)) => {
                        let mut out = String::from("NON-COMMUTING\n");
                        write!(out, "{}", c.tau).unwrap();
                        writeln!(out, "level {}", c.level).unwrap();
                        writeln!(out, "point {}", c.point).unwrap();
                        Ok((1, out))
                    }
                    Err(Error::SearchBudgetExceeded { max_level, .. }) => {
                        Ok((3, format!("SEARCH-BUDGET max-level={max_level}\n")))
                    }
                    Err(e) => Err(e.into()),
                }
            }
            Command::Selftest { seed, cases } => {
                let report = selftest::run(seed, cases);
                Ok((if report.all_pass() { 0 } else { 1 }, report.to_string()))
            }
        }
    }

    fn table_op(&mut self, op: TableOp) -> Outcome {
        match op {
            TableOp::Check { matrix, table } => {
                let a = self.matrix(&matrix)?;
                match parse_table(&a, &read(&table)?) {
                    Ok(t) => Ok((0, t.to_string())),
                    Err(e @ Error::Parse { .. }) => Err(in_file(&table)(e)),
                    Err(e) => Ok((1, format!("INVALID {e}\n"))),
                }
            }
            TableOp::Compose { matrix, outer, inner } => {
                let a = self.matrix(&matrix)?;
                let (o, i) = (self.table(&a, &outer)?, self.table(&a, &inner)?);
                Ok((0, o.compose(&i).to_string()))
            }
            TableOp::Invert { matrix, table } => {
                let a = self.matrix(&matrix)?;
                Ok((0, self.table(&a, &table)?.invert().to_string()))
            }
            TableOp::Apply { matrix, table, point } => {
                let a = self.matrix(&matrix)?;
                let t = self.table(&a, &table)?;
                let x = parse_point(&a, &point)?;
                Ok((0, format!("{}\n", t.apply(&x))))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match Session::default().run(cli.command) {
        Ok((code, out)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Other(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code as u8)
        }
    }
}
