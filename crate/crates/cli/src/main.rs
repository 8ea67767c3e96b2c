use clap::{Args, Parser, Subcommand, ValueEnum};
use lattperm::dimer;
use lattperm::pathweb::{self, checks as pw};
use lattperm::perm::{PermSystem, Target};
use lattperm::scalar::{parse_rational, Rational};
use lattperm::spectral::{self, DualTorus};
use lattperm::suite::{Suite, Tier};
use lattperm::{rwalk, worm, ExtTorus, Reflection, Report, Torus};
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;

mod output;
use output::{csv_rational, JsonReport, Sink};

#[derive(Parser)]
#[command(name = "lattperm", version, about = "Dimers and lattice permutations on tori: exact counts, spectral checks, Monte Carlo")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Dimer cover counts and monomer correlations.
    #[command(subcommand)]
    Dimer(DimerCmd),
    /// Lattice permutation partition and two-point functions.
    #[command(subcommand)]
    Perm(PermCmd),
    /// Random path model checks on the extended torus.
    #[command(subcommand)]
    Pathweb(PathwebCmd),
    /// Fourier-side quantities and checks.
    #[command(subcommand)]
    Spec(SpecCmd),
    /// Expected number of returns of the simple random walk.
    #[command(subcommand)]
    Rwalk(RwalkCmd),
    /// Worm Monte Carlo for the monomer correlation.
    #[command(subcommand)]
    Worm(WormCmd),
    /// Acceptance suites.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args, Clone)]
struct Geom {
    #[arg(long)]
    d: usize,
    #[arg(long = "L")]
    l: usize,
}

#[derive(Args, Clone)]
struct PermParams {
    #[command(flatten)]
    geom: Geom,
    #[arg(long = "N", default_value_t = 1)]
    n: u32,
    /// Monomer weight as `p/q`.
    #[arg(long, default_value = "0", value_parser = rational)]
    rho: Rational,
}

fn rational(s: &str) -> Result<Rational, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational of the form p/q"))
}

/// A site given as comma-separated coordinates.
#[derive(Clone, Debug)]
struct Coords(Vec<i64>);

fn coords(s: &str) -> Result<Coords, String> {
    s.split(',').map(|v| v.trim().parse::<i64>().map_err(|e| format!("`{s}`: {e}"))).collect::<Result<_, _>>().map(Coords)
}

#[derive(Subcommand)]
enum DimerCmd {
    /// `|D(removed)|`.
    Count {
        #[command(flatten)]
        geom: Geom,
        /// Removed site as comma-separated coordinates; repeatable.
        #[arg(long, value_parser = coords)]
        remove: Vec<Coords>,
        #[arg(long, value_enum)]
        counter: Option<CounterArg>,
    },
    /// `Xi_L(x)` at every site, CSV.
    Xi {
        #[command(flatten)]
        geom: Geom,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CounterArg {
    Backtracking,
    Transfer,
}

#[derive(Subcommand)]
enum PermCmd {
    /// `Z^ell` as an exact rational, JSON.
    Zf {
        #[command(flatten)]
        p: PermParams,
    },
    /// `G(o, x)`, CSV; all sites unless `--x` is given.
    G {
        #[command(flatten)]
        p: PermParams,
        #[arg(long, value_parser = coords)]
        x: Option<Coords>,
    },
    /// Law of the walk end, CSV.
    TargetLaw {
        #[command(flatten)]
        p: PermParams,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum PathwebCheck {
    Components,
    Expansion,
    Chessboard,
    Rp,
    Key,
}

#[derive(Subcommand)]
enum PathwebCmd {
    /// JSON report for one check.
    Verify {
        #[arg(long, value_enum)]
        check: PathwebCheck,
        #[command(flatten)]
        geom: Geom,
        #[arg(long = "N", default_value_t = 1)]
        n: u32,
        #[arg(long, default_value = "1", value_parser = rational)]
        lambda: Rational,
        /// Monomer weight for the Key Inequality.
        #[arg(long, default_value = "0", value_parser = rational)]
        rho: Rational,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Number of seeded vectors, functions or fields.
        #[arg(long, default_value_t = 20)]
        samples: u64,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SpecCheck {
    Hf,
    Parity,
    Modediff,
    Psi,
    Infrared,
}

#[derive(Clone, Copy, ValueEnum)]
enum Part {
    Full,
    Odd,
    Even,
}

#[derive(Subcommand)]
enum SpecCmd {
    /// `I_L(d)` with the comparison value `r_d / (4d)`, JSON.
    Il {
        #[command(flatten)]
        geom: Geom,
    },
    /// Real part of `Upsilon_L` at every site, CSV.
    Upsilon {
        #[command(flatten)]
        geom: Geom,
    },
    /// Spectrum of the two-point function, CSV `k_1,...,k_d,re,im`.
    Dump {
        #[command(flatten)]
        p: PermParams,
        #[arg(long, value_enum, default_value = "full")]
        part: Part,
    },
    /// JSON report for one check.
    Verify {
        #[arg(long, value_enum)]
        check: SpecCheck,
        #[command(flatten)]
        p: PermParams,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum WalkMethod {
    Quad,
    Mc,
    Partial,
}

#[derive(Subcommand)]
enum RwalkCmd {
    /// `r_d`, JSON `{d, value, err, method}`.
    R {
        #[arg(long)]
        d: usize,
        #[arg(long, value_enum, default_value = "quad")]
        method: WalkMethod,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        #[arg(long, default_value_t = 200_000)]
        trials: u64,
        #[arg(long, default_value_t = 4096)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum WormCmd {
    /// `Xi^(x)` with errors, CSV; run metadata as JSON to `--meta`.
    Xi {
        #[command(flatten)]
        geom: Geom,
        #[arg(long, default_value_t = 10_000)]
        sweeps: u64,
        #[arg(long, default_value_t = 1000)]
        therm: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        chains: u64,
        #[arg(long)]
        meta: Option<std::path::PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum TierArg {
    Fast,
    Full,
    Mc,
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Every criterion enabled at the tier, JSON.
    All {
        #[arg(long, value_enum, default_value = "fast")]
        tier: TierArg,
    },
    /// A single criterion by number, JSON.
    Criterion {
        id: u8,
        #[arg(long, value_enum, default_value = "full")]
        tier: TierArg,
    },
}

enum Failure {
    Usage(String),
    Check,
    Io(std::io::Error),
}

impl From<lattperm::Error> for Failure {
    fn from(e: lattperm::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Run = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut sink = match Sink::open(cli.out.as_deref()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let res = dispatch(cli.cmd, &mut sink).and_then(|()| sink.flush().map_err(Failure::Io));
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cmd: Cmd, out: &mut Sink) -> Run {
    match cmd {
        Cmd::Dimer(c) => dimer_cmd(c, out),
        Cmd::Perm(c) => perm_cmd(c, out),
        Cmd::Pathweb(c) => pathweb_cmd(c, out),
        Cmd::Spec(c) => spec_cmd(c, out),
        Cmd::Rwalk(c) => rwalk_cmd(c, out),
        Cmd::Worm(c) => worm_cmd(c, out),
        Cmd::Verify(c) => verify_cmd(c, out),
    }
}

fn even_torus(g: &Geom) -> Result<Torus, Failure> {
    Ok(Torus::even(g.d, g.l)?)
}

fn site(t: &Torus, c: &[i64]) -> Result<usize, Failure> {
    Ok(t.site_index(c)?)
}

fn finish(out: &mut Sink, rep: JsonReport) -> Run {
    let pass = rep.pass;
    out.json(&rep)?;
    if pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn dimer_cmd(c: DimerCmd, out: &mut Sink) -> Run {
    match c {
        DimerCmd::Count { geom, remove, counter } => {
            let t = even_torus(&geom)?;
            let removed = remove.iter().map(|c| site(&t, &c.0)).collect::<Result<Vec<_>, _>>()?;
            let counter = match counter {
                Some(CounterArg::Backtracking) => dimer::Counter::Backtracking,
                Some(CounterArg::Transfer) => dimer::Counter::Transfer,
                None => dimer::default_counter(&t),
            };
            let n = dimer::count_covers(&t, &removed, counter)?;
            writeln!(out, "{n}")?;
        }
        DimerCmd::Xi { geom } => {
            let t = even_torus(&geom)?;
            let xi = dimer::correlation_table(&t, dimer::default_counter(&t))?;
            csv_rational(out, &t, "xi", &xi)?;
        }
    }
    Ok(())
}

fn perm_cmd(c: PermCmd, out: &mut Sink) -> Run {
    match c {
        PermCmd::Zf { p } => {
            let sys = PermSystem::new(even_torus(&p.geom)?)?;
            let z = sys.z(Target::Ell, p.n, &p.rho)?;
            #[derive(Serialize)]
            struct Zf {
                d: usize,
                l: usize,
                n: u32,
                rho: String,
                z_num: String,
                z_den: String,
            }
            out.json(&Zf {
                d: p.geom.d,
                l: p.geom.l,
                n: p.n,
                rho: p.rho.to_string(),
                z_num: z.numer().to_string(),
                z_den: z.denom().to_string(),
            })?;
        }
        PermCmd::G { p, x } => {
            let t = even_torus(&p.geom)?;
            let sys = PermSystem::new(t.clone())?;
            match x {
                Some(c) => {
                    let xs = site(&t, &c.0)?;
                    let g = sys.two_point(p.n, &p.rho, t.origin(), xs)?;
                    output::csv_header(out, t.d(), "g")?;
                    output::csv_row(out, &t.coords(xs), &g)?;
                }
                None => {
                    let g = sys.two_point_table(p.n, &p.rho)?;
                    csv_rational(out, &t, "g", &g)?;
                }
            }
        }
        PermCmd::TargetLaw { p } => {
            let t = even_torus(&p.geom)?;
            let sys = PermSystem::new(t.clone())?;
            let law = sys.target_law(p.n, &p.rho)?;
            csv_rational(out, &t, "p", &law)?;
        }
    }
    Ok(())
}

fn pathweb_cmd(c: PathwebCmd, out: &mut Sink) -> Run {
    let PathwebCmd::Verify { check, geom, n, lambda, rho, seed, samples } = c;
    let t = even_torus(&geom)?;
    let ext = ExtTorus::new(t.clone());
    let mut params = BTreeMap::new();
    params.insert("d", geom.d.to_string());
    params.insert("L", geom.l.to_string());
    params.insert("N", n.to_string());
    params.insert("seed", seed.to_string());
    params.insert("samples", samples.to_string());
    let report = match check {
        PathwebCheck::Components => {
            params.insert("lambda", lambda.to_string());
            pathweb::verify_lemma_components(&ext, n, &lambda)?
        }
        PathwebCheck::Expansion => {
            params.insert("lambda", lambda.to_string());
            let mut r = Report::new();
            for i in 0..samples {
                let v = pw::seeded_rational_vector(t.n(), seed + i);
                r.merge(pathweb::polynomial_expansion_check(&ext, n, &lambda, &pathweb::h_from_v(&ext, &v))?);
            }
            r
        }
        PathwebCheck::Chessboard => {
            params.insert("lambda", lambda.to_string());
            let agg = pathweb::Aggregate::build(&ext, n, &lambda, None, pw::DEFAULT_BUDGET)?;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut r = Report::new();
            for _ in 0..samples {
                let h: Vec<f64> = (0..ext.vertex_count()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                r.merge(pathweb::chessboard_check(&agg, &ext, &h, 1e-12)?);
            }
            r
        }
        PathwebCheck::Rp => {
            params.insert("lambda", lambda.to_string());
            let mut r = Report::new();
            for plane in Reflection::all(&t) {
                let form = pathweb::RpForm::build(&ext, n, &lambda, plane, pw::DEFAULT_BUDGET)?;
                r.merge(pathweb::reflection_positivity_check(&form, samples as usize, seed));
            }
            r
        }
        PathwebCheck::Key => {
            params.insert("rho", rho.to_string());
            let sys = PermSystem::new(t.clone())?;
            let vs: Vec<Vec<Rational>> = (0..samples).map(|i| pw::seeded_integer_vector(t.n(), seed + i)).collect();
            pathweb::key_inequality_check(&sys, n, &rho, &vs)?
        }
    };
    let name = serde_json::to_value(check).unwrap().as_str().unwrap().to_string();
    finish(out, JsonReport::new(format!("pathweb.{name}"), params, report))
}

fn spec_cmd(c: SpecCmd, out: &mut Sink) -> Run {
    match c {
        SpecCmd::Il { geom } => {
            if geom.l < 4 {
                return Err(lattperm::Error::SideTooSmall(geom.l).into());
            }
            let il: f64 = spectral::i_l(geom.d, geom.l)?;
            let rd = if geom.d >= 3 { Some(rwalk::r_quadrature::<f64>(geom.d, 512)?.value) } else { None };
            #[derive(Serialize)]
            struct Il {
                d: usize,
                l: usize,
                #[serde(rename = "I_L")]
                i_l: f64,
                r_d_over_4d: Option<f64>,
                gap: Option<f64>,
            }
            let target = rd.map(|r| r / (4.0 * geom.d as f64));
            out.json(&Il { d: geom.d, l: geom.l, i_l: il, r_d_over_4d: target, gap: target.map(|t| il - t) })?;
        }
        SpecCmd::Upsilon { geom } => {
            let t = Torus::new(geom.d, geom.l)?;
            let u = spectral::upsilon_complex::<f64>(geom.d, geom.l)?;
            output::csv_header_named(out, t.d(), "x", &["re", "im"])?;
            for x in 0..t.n() {
                output::csv_floats(out, &t.coords(x), &[u[x].re, u[x].im])?;
            }
        }
        SpecCmd::Dump { p, part } => {
            let sys = PermSystem::new(even_torus(&p.geom)?)?;
            let (dual, s) = spectral::spectra_from_system(&sys, p.n, &p.rho)?;
            let v = match part {
                Part::Full => &s.g_hat,
                Part::Odd => &s.go_hat,
                Part::Even => &s.ge_hat,
            };
            output::csv_header_named(out, dual.torus().d(), "k", &["re", "im"])?;
            for m in 0..dual.len() {
                output::csv_floats(out, &dual.mode(m), &[v[m].re, v[m].im])?;
            }
        }
        SpecCmd::Verify { check, p } => {
            let t = even_torus(&p.geom)?;
            let mut params = BTreeMap::new();
            params.insert("d", p.geom.d.to_string());
            params.insert("L", p.geom.l.to_string());
            params.insert("N", p.n.to_string());
            params.insert("rho", p.rho.to_string());
            let report = if let SpecCheck::Psi = check {
                if t.d() == 2 && t.l() > 6 {
                    spectral::psi_symmetrisation_check::<f64>(&DualTorus::new(t), None, 1e-10)?
                } else {
                    let sys = PermSystem::new(t)?;
                    let (dual, s) = spectral::spectra_from_system(&sys, p.n, &p.rho)?;
                    spectral::psi_symmetrisation_check(&dual, Some(&s), 1e-10)?
                }
            } else {
                let sys = PermSystem::new(t)?;
                let (dual, s) = spectral::spectra_from_system(&sys, p.n, &p.rho)?;
                match check {
                    SpecCheck::Hf => spectral::high_frequency_check(&dual, &s, 1e-10),
                    SpecCheck::Parity => spectral::parity_symmetry_check(&dual, &s, 1e-10)?,
                    SpecCheck::Modediff => spectral::mode_difference_identity(&dual, &s, 1e-10)?,
                    SpecCheck::Infrared => spectral::infrared_check(&dual, &s, 1e-9)?,
                    SpecCheck::Psi => unreachable!(),
                }
            };
            let name = serde_json::to_value(check).unwrap().as_str().unwrap().to_string();
            return finish(out, JsonReport::new(format!("spec.{name}"), params, report));
        }
    }
    Ok(())
}

fn rwalk_cmd(c: RwalkCmd, out: &mut Sink) -> Run {
    let RwalkCmd::R { d, method, grid, trials, steps, seed } = c;
    let est = match method {
        WalkMethod::Quad => rwalk::r_quadrature::<f64>(d, grid)?,
        WalkMethod::Mc => rwalk::r_montecarlo(d, trials, steps, seed)?,
        WalkMethod::Partial => rwalk::r_partial_sum(d, steps)?,
    };
    out.json(&est)?;
    Ok(())
}

fn worm_cmd(c: WormCmd, out: &mut Sink) -> Run {
    let WormCmd::Xi { geom, sweeps, therm, seed, chains, meta } = c;
    let t = even_torus(&geom)?;
    let mut cfg = worm::WormConfig::new(sweeps, therm, seed);
    cfg.chains = chains;
    let est = worm::worm_run_with(&t, &cfg)?;
    output::csv_header_named(out, t.d(), "x", &["xi_hat", "stderr"])?;
    for x in 0..t.n() {
        output::csv_floats(out, &t.coords(x), &[est.xi[x], est.stderr[x]])?;
    }
    if let Some(path) = meta {
        #[derive(Serialize)]
        struct Meta<'a> {
            schema: &'static str,
            d: usize,
            l: usize,
            config: &'a worm::WormConfig,
            updates: u64,
            closures: u64,
        }
        let m = Meta { schema: output::SCHEMA, d: t.d(), l: t.l(), config: &est.config, updates: est.updates, closures: est.closures };
        std::fs::write(path, serde_json::to_string_pretty(&m).unwrap() + "\n")?;
    }
    Ok(())
}

fn verify_cmd(c: VerifyCmd, out: &mut Sink) -> Run {
    let (tier, ids) = match c {
        VerifyCmd::All { tier } => (tier, None),
        VerifyCmd::Criterion { id, tier } => {
            if !(1..=15).contains(&id) {
                return Err(Failure::Usage(format!("criterion {id} does not exist (1..=15)")));
            }
            (tier, Some(vec![id]))
        }
    };
    let tier = match tier {
        TierArg::Fast => Tier::Fast,
        TierArg::Full => Tier::Full,
        TierArg::Mc => Tier::Mc,
    };
    let suite = Suite::new(tier);
    let ids = ids.unwrap_or_else(|| suite.enabled());
    let mut all = true;
    let mut results = Vec::new();
    for id in ids {
        let o = suite.run(id)?;
        eprintln!(
            "[{:>2}] {} {} ({:.1} s)",
            o.id,
            if o.report.pass { "PASS" } else { "FAIL" },
            o.title,
            o.seconds
        );
        all &= o.report.pass;
        let mut params = BTreeMap::new();
        params.insert("criterion", o.id.to_string());
        params.insert("tier", format!("{tier:?}").to_lowercase());
        let mut rep = JsonReport::new(o.title.to_string(), params, o.report);
        rep.known_failure = o.known_failure;
        results.push(rep);
    }
    out.json(&results)?;
    if all {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}
