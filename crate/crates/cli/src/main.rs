use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use coloured_neretin::abelian::{vf_abelianization, SftGraph};
use coloured_neretin::interval::default_precision;
use coloured_neretin::io::{element_to_json, group_from_specs, parse_element_file, GeneratorSpec};
use coloured_neretin::lattice::{
    appendix_counts, covolume_chain, dominant_coefficient_compare, prime_windows, ramanujan_primes, table_row,
    verify_smallest_inequality, CSV_HEADER,
};
use coloured_neretin::sftbridge::{Bisection, PathTranslator};
use coloured_neretin::{selftest, ColourGroup, CompleteSubtree, PlaneOrder, SignMode, SignTarget, TreePairElement};

#[derive(Parser)]
#[command(name = "coloured-neretin", version, about = "Exact computations in coloured Neretin groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Vf,
    Nf,
}

/// Colour group either by orbit sizes or by degree and generators.
#[derive(clap::Args, Clone)]
struct GroupArgs {
    /// Orbit sizes, e.g. 2,2,3; implies d = sum - 1
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["d", "gens"])]
    orbits: Option<Vec<usize>>,
    /// Tree degree minus one
    #[arg(long)]
    d: Option<usize>,
    /// Generators of F in cycle notation, e.g. "(1 2)(3 4)"
    #[arg(long = "gen", requires = "d")]
    gens: Vec<String>,
}

impl GroupArgs {
    fn is_given(&self) -> bool {
        self.orbits.is_some() || self.d.is_some()
    }

    fn group(&self) -> Result<ColourGroup, String> {
        match (&self.orbits, self.d) {
            (Some(o), _) => {
                if o.is_empty() || o.contains(&0) || o.iter().sum::<usize>() < 3 {
                    return Err(format!("orbit sizes must be positive with sum at least 3, got {o:?}"));
                }
                Ok(ColourGroup::product_of_symmetric(o))
            }
            (None, Some(d)) => {
                let specs: Vec<GeneratorSpec> = self.gens.iter().cloned().map(GeneratorSpec::Cycles).collect();
                group_from_specs(d, &specs).map_err(|e| e.to_string())
            }
            (None, None) => Err("give --orbits or --d".into()),
        }
    }

    fn orbit_sizes(&self) -> Result<Vec<usize>, String> {
        Ok(self.group()?.orbit_sizes())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Composite A∘B (apply B first), reduced
    Compose { a: PathBuf, b: PathBuf },
    /// Inverse element
    Invert { a: PathBuf },
    /// Reduced form
    Reduce { a: PathBuf },
    /// Sign of the leaf permutation on a union of orbits
    Sign {
        a: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        subset: Vec<u8>,
        #[arg(long, value_enum, default_value = "vf")]
        target: Target,
        /// Sign of the representative on the ball of this radius instead of the class value
        #[arg(long)]
        honest_depth: Option<usize>,
    },
    /// Abelianization of V_F via the Smith normal form
    Abelianization {
        #[command(flatten)]
        group: GroupArgs,
    },
    /// The orbit graph and its matrix
    Graph {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Ball cardinalities and index ratios by level
    CovolumeTable {
        #[arg(long, value_delimiter = ',', required = true)]
        orbits: Vec<usize>,
        #[arg(long, default_value_t = 6)]
        max_n: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Order of the finite quotient of a hypothetical lattice, for the covolume chain
        #[arg(long)]
        gamma: Option<String>,
    },
    /// Smallest-case inequality for every orbit partition up to max-d
    VerifySmallest {
        #[arg(long, default_value_t = 12)]
        max_d: usize,
    },
    /// Primes in (m/2, m]
    PrimesWindow {
        #[arg(long, default_value_t = 100_000)]
        max_m: usize,
    },
    /// Ball counts in the tree with root degree k and other degrees d+1
    AppendixCounts {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Converts a bisection file to an element, or an element file to a bisection
    Bisection {
        file: PathBuf,
        /// Colour group for reading a bisection; without it the file is read as an element
        #[command(flatten)]
        group: GroupArgs,
    },
    /// Runs the acceptance checks
    Selftest,
}

/// A failure with its exit status.
struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(1, e.to_string())
    }
}

fn load(path: &Path) -> Result<TreePairElement, Failure> {
    parse_element_file(path).map_err(|e| Failure(1, format!("{}: {e}", path.display())))
}

fn describe_ab(rank: usize) -> String {
    match rank {
        0 => "trivial".into(),
        1 => "Z/2".into(),
        r => format!("(Z/2)^{r}"),
    }
}

fn run(cmd: Command) -> Result<String, Failure> {
    let mut out = String::new();
    match cmd {
        Command::Compose { a, b } => {
            let (a, b) = (load(&a)?, load(&b)?);
            out = element_to_json(&a.compose(&b)?);
        }
        Command::Invert { a } => out = element_to_json(&load(&a)?.inverse()),
        Command::Reduce { a } => out = element_to_json(&load(&a)?.reduce()),
        Command::Sign { a, subset, target, honest_depth } => {
            let e = load(&a)?;
            let mode = match honest_depth {
                Some(n) => SignMode::Honest(CompleteSubtree::ball(e.d(), n)),
                None => SignMode::Class(match target {
                    Target::Vf => SignTarget::Vf,
                    Target::Nf => SignTarget::Nf,
                }),
            };
            let s = e.sign(&subset, &mode)?;
            writeln!(out, "sign on {:?}: {:+}", s.subset, s.value).unwrap();
        }
        Command::Abelianization { group } => {
            let sizes = group.orbit_sizes().map_err(|e| Failure(2, e))?;
            let ab = vf_abelianization(&sizes)?;
            let factors: Vec<String> = ab.smith.invariant_factors.iter().map(|x| x.to_string()).collect();
            writeln!(out, "orbit sizes: {sizes:?} (d = {})", sizes.iter().sum::<usize>() - 1).unwrap();
            writeln!(out, "invariant factors of id - M^t: [{}]", factors.join(", ")).unwrap();
            writeln!(out, "determinant: {} (expected {})", ab.determinant, ab.expected_determinant()).unwrap();
            writeln!(out, "abelianization: {}", describe_ab(ab.rank)).unwrap();
            writeln!(out, "index of the commutator subgroup: {}", 1u128 << ab.rank).unwrap();
            if !ab.matches_closed_form() {
                return Err(Failure(1, format!("{out}closed form predicts {}", describe_ab(ab.closed_form_rank))));
            }
        }
        Command::Graph { group, dot } => {
            let sizes = group.orbit_sizes().map_err(|e| Failure(2, e))?;
            let g = SftGraph::new(&sizes)?;
            let names: Vec<String> = (0..g.vertices().len()).map(|v| g.vertex_name(v)).collect();
            writeln!(out, "vertices: {}", names.join(" ")).unwrap();
            writeln!(out, "edges: {}", g.edges().len()).unwrap();
            write!(out, "{}", g.matrix()).unwrap();
            if let Some(path) = dot {
                std::fs::write(&path, g.to_dot())?;
                writeln!(out, "wrote {}", path.display()).unwrap();
            }
        }
        Command::CovolumeTable { orbits, max_n, csv, gamma } => {
            let mut table = String::from(CSV_HEADER);
            table.push('\n');
            for n in 1..=max_n {
                table.push_str(&table_row(&orbits, n)?.to_csv());
                table.push('\n');
            }
            let cmp = dominant_coefficient_compare(&orbits, default_precision())?;
            match csv {
                Some(path) => {
                    std::fs::write(&path, &table)?;
                    writeln!(out, "wrote {} rows to {}", max_n, path.display()).unwrap();
                }
                None => out.push_str(&table),
            }
            writeln!(
                out,
                "dominant coefficients: {:.6} vs {:.6}, ratio {}{}",
                cmp.lhs.midpoint_f64(),
                cmp.rhs.midpoint_f64(),
                if cmp.strict_less { "tends to zero" } else { "does not tend to zero" },
                if cmp.flagged { " (d = 2, single orbit: handled separately)" } else { "" }
            )
            .unwrap();
            if let Some(g) = gamma {
                let g = g.parse().map_err(|_| Failure(2, format!("not a positive integer: {g}")))?;
                let c = covolume_chain(&orbits, max_n, &g)?;
                writeln!(out, "c_{max_n} = {}", c.c_n).unwrap();
                writeln!(out, "lower bound = {}", c.lower_bound).unwrap();
            }
        }
        Command::VerifySmallest { max_d } => {
            let mut bad = 0;
            for d in 2..=max_d {
                for p in coloured_neretin::abelian::partitions(d + 1) {
                    let c = verify_smallest_inequality(&p, default_precision())?;
                    let l = p.len() - 1;
                    if l + 1 < d && d >= 3 && c.verdict != coloured_neretin::lattice::InequalityVerdict::Holds {
                        bad += 1;
                    }
                    writeln!(out, "d={d} {p:?} {} margin {:.6e}", c.verdict.as_str(), c.margin.midpoint_f64()).unwrap();
                }
            }
            if bad > 0 {
                return Err(Failure(1, format!("{out}{bad} partitions with fewer than d-1 extra orbits fail")));
            }
        }
        Command::PrimesWindow { max_m } => {
            if max_m < 2 {
                return Err(Failure(2, "max-m must be at least 2".into()));
            }
            let primes = ramanujan_primes(max_m);
            writeln!(out, "primes in ({}, {max_m}]: {primes:?}", max_m / 2).unwrap();
            if max_m >= 17 {
                let rep = prime_windows(17, max_m);
                writeln!(out, "m in [17, {max_m}]: fewest primes {} at m = {}", rep.min_count, rep.argmin).unwrap();
                if !rep.below_three.is_empty() {
                    return Err(Failure(1, format!("{out}windows with fewer than three primes: {:?}", rep.below_three)));
                }
            }
        }
        Command::AppendixCounts { d, k, n } => {
            let a = appendix_counts(d, k, n).map_err(|e| Failure(2, e.to_string()))?;
            writeln!(out, "sphere: {}", a.sphere).unwrap();
            writeln!(out, "aut_ball: {}", a.aut_ball).unwrap();
            writeln!(out, "bound k!*d^(k*d^(n-1)): {}", a.bound).unwrap();
            writeln!(out, "bound_ok: {}", a.bound_ok).unwrap();
            writeln!(out, "recursion matches k!*d!^(k(d^(n-1)-1)/(d-1)): {}", a.matches_closed_form()).unwrap();
            writeln!(
                out,
                "printed exponent k(d^n-1)/(d-1) gives {}: {}",
                a.printed_form,
                if a.matches_printed_form() { "agrees" } else { "disagrees with the recursion" }
            )
            .unwrap();
            if !a.bound_ok {
                return Err(Failure(1, out));
            }
        }
        Command::Bisection { file, group } => {
            let text = std::fs::read_to_string(&file)?;
            if group.is_given() {
                let plane = PlaneOrder::new(group.group().map_err(|e| Failure(2, e))?);
                let tr = PathTranslator::new(&plane)?;
                let b: Bisection = serde_json::from_str(&text)?;
                out = element_to_json(&tr.bisection_to_element(&b)?);
            } else {
                let e = load(&file)?;
                let tr = PathTranslator::new(e.plane())?;
                out = serde_json::to_string(&tr.element_to_bisection(&e))?;
            }
        }
        Command::Selftest => {
            let mut failed = 0;
            for r in selftest::run_all() {
                writeln!(out, "{r}").unwrap();
                failed += usize::from(!r.passed);
            }
            if failed > 0 {
                return Err(Failure(1, format!("{out}{failed} criteria failed")));
            }
        }
    }
    if !out.ends_with('\n') {
        out.push('\n');
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
