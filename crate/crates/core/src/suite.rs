//! The fifteen acceptance criteria as runnable checks, shared by the CLI
//! `verify all` command and the acceptance test target.

use crate::dimer::{self, Counter};
use crate::error::Result;
use crate::pathweb::checks::{seeded_integer_vector, seeded_rational_vector};
use crate::pathweb::{
    chessboard_check, h_from_v, key_inequality_check, polynomial_expansion_check, reflection_positivity_check,
    verify_lemma_components, Aggregate, RpForm,
};
use crate::perm::PermSystem;
use crate::report::Report;
use crate::rwalk;
use crate::scalar::{ratio, rint, to_real, Rational};
use crate::spectral::{self, DualTorus};
use crate::torus::{ExtTorus, Reflection, Torus};
use crate::worm;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::Instant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    /// Exact checks on the smallest tori, seconds.
    Fast,
    /// Adds `(2,6)` two-point tables, `d = 3` counters and `L = 64` sums.
    Full,
    /// Adds the worm runs.
    Mc,
}

#[derive(Debug, Clone, Copy)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    /// Lowest tier that runs this criterion at all.
    pub tier: Tier,
}

pub const CRITERIA: [Criterion; 15] = [
    Criterion { id: 1, title: "dimer/permutation identity G_{L,2,0} = Xi_L", tier: Tier::Fast },
    Criterion { id: 2, title: "G_{L,N,0}(e1) = 1/(dN)", tier: Tier::Fast },
    Criterion { id: 3, title: "even-sector vanishing at rho = 0", tier: Tier::Fast },
    Criterion { id: 4, title: "pointwise bound Xi_L <= 1/(2d)", tier: Tier::Fast },
    Criterion { id: 5, title: "Key Inequality on seeded integer vectors", tier: Tier::Fast },
    Criterion { id: 6, title: "component identities on the extended torus", tier: Tier::Fast },
    Criterion { id: 7, title: "polynomial expansion of Z(phi h^v)", tier: Tier::Fast },
    Criterion { id: 8, title: "chessboard estimate", tier: Tier::Fast },
    Criterion { id: 9, title: "reflection-positivity surrogate", tier: Tier::Fast },
    Criterion { id: 10, title: "high-frequency bound", tier: Tier::Fast },
    Criterion { id: 11, title: "mode-difference identity, parity symmetries, Psi bijection", tier: Tier::Fast },
    Criterion { id: 12, title: "finite-L infrared-ultraviolet inequality", tier: Tier::Fast },
    Criterion { id: 13, title: "Watson constant r_3 and I_L(3)", tier: Tier::Full },
    Criterion { id: 14, title: "worm Monte Carlo", tier: Tier::Mc },
    Criterion { id: 15, title: "backtracking vs transfer dimer counts", tier: Tier::Fast },
];

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub report: Report,
    /// Set when the only failing clause is one known to be unattainable.
    pub known_failure: Option<String>,
    pub seconds: f64,
}

const SEED: u64 = 20_240_917;

/// Runs criteria with one shared cache of permutation systems.
pub struct Suite {
    tier: Tier,
    systems: Mutex<HashMap<(usize, usize), Arc<PermSystem>>>,
}

impl Suite {
    pub fn new(tier: Tier) -> Self {
        Suite { tier, systems: Mutex::new(HashMap::new()) }
    }

    pub fn tier(&self) -> Tier {
        self.tier
    }

    pub fn system(&self, d: usize, l: usize) -> Result<Arc<PermSystem>> {
        if let Some(s) = self.systems.lock().unwrap().get(&(d, l)) {
            return Ok(s.clone());
        }
        let s = Arc::new(PermSystem::new(Torus::even(d, l)?)?);
        self.systems.lock().unwrap().insert((d, l), s.clone());
        Ok(s)
    }

    /// `(d, L)` points shared by criteria 2, 3, 10, 11 and 12.
    fn perm_points(&self) -> Vec<(usize, usize)> {
        let mut v = vec![(1, 4), (2, 4)];
        if self.tier >= Tier::Full {
            v.push((2, 6));
        }
        v
    }

    pub fn run(&self, id: u8) -> Result<Outcome> {
        let c = CRITERIA.iter().find(|c| c.id == id).expect("criterion id in 1..=15");
        let start = Instant::now();
        let (report, known_failure) = match id {
            1 => (self.identity()?, None),
            2 => (self.nearest_neighbour()?, None),
            3 => (self.even_vanishing()?, None),
            4 => (self.pointwise()?, None),
            5 => (self.key()?, None),
            6 => (self.components()?, None),
            7 => (self.expansion()?, None),
            8 => (self.chessboard()?, None),
            9 => (self.rp()?, None),
            10 => (self.spectral(SpecCheck::HighFrequency)?, None),
            11 => (self.spectral(SpecCheck::Symmetries)?, None),
            12 => (self.spectral(SpecCheck::Infrared)?, None),
            13 => self.watson()?,
            14 => (self.worm()?, None),
            15 => (self.counters()?, None),
            _ => unreachable!(),
        };
        Ok(Outcome { id, title: c.title, report, known_failure, seconds: start.elapsed().as_secs_f64() })
    }

    /// Criteria enabled at this tier, in order.
    pub fn enabled(&self) -> Vec<u8> {
        CRITERIA.iter().filter(|c| c.tier <= self.tier).map(|c| c.id).collect()
    }

    fn identity(&self) -> Result<Report> {
        let mut r = Report::new();
        for (d, l) in [(1, 4), (2, 4)] {
            let sys = self.system(d, l)?;
            let t = sys.torus();
            let g = sys.two_point_table(2, &Rational::zero())?;
            let xi = dimer::correlation_table(t, dimer::default_counter(t))?;
            for x in 0..t.n() {
                r.check(g[x] == xi[x], || format!("({d},{l}) x={:?}: G = {} but Xi = {}", t.coords(x), g[x], xi[x]));
            }
        }
        Ok(r)
    }

    fn nearest_neighbour(&self) -> Result<Report> {
        let mut r = Report::new();
        for (d, l) in self.perm_points() {
            let sys = self.system(d, l)?;
            let e1 = sys.torus().unit(1);
            for n in 1..=3u32 {
                let g = sys.two_point(n, &Rational::zero(), 0, e1)?;
                let want = ratio(1, (d as i64) * n as i64);
                r.check(g == want, || format!("({d},{l}) N={n}: G(e1) = {g}, expected {want}"));
            }
        }
        Ok(r)
    }

    fn even_vanishing(&self) -> Result<Report> {
        let mut r = Report::new();
        for (d, l) in self.perm_points() {
            let sys = self.system(d, l)?;
            let t = sys.torus();
            for n in 1..=3u32 {
                let g = sys.two_point_table(n, &Rational::zero())?;
                for x in (0..t.n()).filter(|&x| !t.is_odd(x)) {
                    r.check(g[x].is_zero(), || format!("({d},{l}) N={n}: G({:?}) = {}", t.coords(x), g[x]));
                }
            }
        }
        Ok(r)
    }

    fn pointwise(&self) -> Result<Report> {
        let mut r = Report::new();
        for (d, l) in [(1, 4), (1, 6), (2, 4), (2, 6)] {
            let t = Torus::even(d, l)?;
            let xi = dimer::correlation_table(&t, dimer::default_counter(&t))?;
            let bound = ratio(1, 2 * d as i64);
            for x in 0..t.n() {
                r.check(xi[x] <= bound, || format!("({d},{l}) x={:?}: Xi = {}", t.coords(x), xi[x]));
            }
        }
        Ok(r)
    }

    fn key(&self) -> Result<Report> {
        let sys = self.system(2, 4)?;
        let len = sys.torus().n();
        let vs: Vec<Vec<Rational>> = (0..100).map(|i| seeded_integer_vector(len, SEED + i)).collect();
        let mut r = Report::new();
        for n in 1..=3u32 {
            for rho in [rint(0), ratio(1, 2), rint(1)] {
                let sub = key_inequality_check(&sys, n, &rho, &vs)?;
                r.note(format!("N={n}, rho={rho}: {}", sub.notes.join("; ")));
                r.merge(Report { notes: vec![], ..sub });
            }
        }
        Ok(r)
    }

    fn components(&self) -> Result<Report> {
        let mut r = Report::new();
        for l in [4, 6] {
            let ext = ExtTorus::new(Torus::even(1, l)?);
            for n in 1..=2u32 {
                for lambda in [rint(1), ratio(1, 2), rint(2)] {
                    r.merge(verify_lemma_components(&ext, n, &lambda)?);
                }
            }
        }
        Ok(r)
    }

    fn expansion(&self) -> Result<Report> {
        let ext = ExtTorus::new(Torus::even(1, 4)?);
        let mut r = Report::new();
        for n in 1..=2u32 {
            for i in 0..20 {
                let v = seeded_rational_vector(ext.base().n(), SEED + 100 + i);
                let h = h_from_v(&ext, &v);
                let mut sub = polynomial_expansion_check(&ext, n, &rint(1), &h)?;
                sub.notes.clear();
                r.merge(sub);
            }
        }
        Ok(r)
    }

    fn chessboard(&self) -> Result<Report> {
        let ext = ExtTorus::new(Torus::even(1, 4)?);
        let agg = Aggregate::build(&ext, 1, &rint(1), None, crate::pathweb::checks::DEFAULT_BUDGET)?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(SEED + 200);
        let mut r = Report::new();
        for _ in 0..100 {
            let h: Vec<f64> = (0..ext.vertex_count()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            let mut sub = chessboard_check(&agg, &ext, &h, 1e-12)?;
            sub.notes.clear();
            r.merge(sub);
        }
        Ok(r)
    }

    fn rp(&self) -> Result<Report> {
        let ext = ExtTorus::new(Torus::even(1, 4)?);
        let mut r = Report::new();
        for plane in Reflection::all(ext.base()) {
            let form = RpForm::build(&ext, 1, &rint(1), plane, crate::pathweb::checks::DEFAULT_BUDGET)?;
            let sub = reflection_positivity_check(&form, 50, SEED + 300 + plane.m as u64);
            r.note(format!("plane {plane:?}: {}", sub.notes.join("; ")));
            r.merge(Report { notes: vec![], ..sub });
        }
        Ok(r)
    }

    fn spectral(&self, which: SpecCheck) -> Result<Report> {
        let mut r = Report::new();
        for (d, l) in self.perm_points() {
            let sys = self.system(d, l)?;
            for n in 1..=2u32 {
                for rho in [rint(0), rint(1)] {
                    let (dual, s) = spectral::spectra_from_system(&sys, n, &rho)?;
                    let tag = format!("({d},{l}) N={n} rho={rho}");
                    let sub = match which {
                        SpecCheck::HighFrequency => spectral::high_frequency_check(&dual, &s, 1e-10),
                        SpecCheck::Symmetries => {
                            let mut a = spectral::mode_difference_identity(&dual, &s, 1e-10)?;
                            a.merge(spectral::parity_symmetry_check(&dual, &s, 1e-10)?);
                            if d == 2 {
                                a.merge(spectral::psi_symmetrisation_check(&dual, Some(&s), 1e-10)?);
                            }
                            a
                        }
                        SpecCheck::Infrared => spectral::infrared_check(&dual, &s, 1e-9)?,
                    };
                    r.note(format!("{tag}: {}", sub.notes.join("; ")));
                    r.merge(Report { notes: vec![], ..sub });
                }
            }
        }
        if which == SpecCheck::Symmetries {
            for l in [4, 6, 8] {
                let dual = DualTorus::new(Torus::even(2, l)?);
                let sub = spectral::psi_symmetrisation_check::<f64>(&dual, None, 1e-10)?;
                r.note(format!("Psi on L={l}: {}", sub.notes.join("; ")));
                r.merge(Report { notes: vec![], ..sub });
            }
        }
        Ok(r)
    }

    fn watson(&self) -> Result<(Report, Option<String>)> {
        let mut r = Report::new();
        let quad = rwalk::r_quadrature::<f64>(3, 1024)?;
        r.check(quad.value > 0.51 && quad.value < 0.52, || format!("quadrature r_3 = {}", quad.value));
        r.note(format!("quadrature r_3 = {:.9} (err {:.1e})", quad.value, quad.err));
        let mc = rwalk::r_montecarlo(3, 200_000, 4096, SEED + 400)?;
        let z = (mc.value - quad.value) / mc.err;
        r.check(z.abs() <= 3.0, || format!("MC r_3 = {} +- {} is {z:.2} stderr from quadrature", mc.value, mc.err));
        r.note(format!("MC r_3 = {:.5} +- {:.5} ({z:+.2} stderr)", mc.value, mc.err));
        let target = quad.value / 12.0;
        let mut il = Report::new();
        let mut prev: Option<f64> = None;
        for l in [16, 32, 64] {
            let v: f64 = spectral::i_l(3, l)?;
            let gap = (v - target).abs() / target;
            if let Some(p) = prev {
                il.check((v - target).abs() < (p - target).abs(), || format!("I_{l}(3) = {v:.6} does not approach {target:.6}"));
            }
            prev = Some(v);
            r.note(format!("I_{l}(3) = {v:.6}, relative gap to r_3/12 = {gap:.3}"));
            if l == 64 {
                il.check(gap < 0.01, || format!("I_64(3) = {v:.6} is {:.1}% from r_3/12 = {target:.6}", 100.0 * gap));
            }
        }
        let half = rwalk::half_angle_integral(3, 256)?;
        r.note(format!(
            "the lattice sum tends to (2/2d) times the half-angle integral {half:.6}, i.e. {:.6}",
            half / 3.0
        ));
        let known = (r.pass && !il.pass).then(|| {
            "I_L(3) converges to about 0.263, not r_3/12 = 0.043; the walk and quadrature clauses pass".to_string()
        });
        r.merge(il);
        Ok((r, known))
    }

    fn worm(&self) -> Result<Report> {
        let mut r = Report::new();
        let t6 = Torus::even(2, 6)?;
        let exact = dimer::correlation_table(&t6, Counter::Transfer)?;
        let est = worm::worm_run(&t6, 1_000_000, 1000, SEED + 500)?;
        let mut worst: f64 = 0.0;
        for x in (0..t6.n()).filter(|&x| t6.is_odd(x)) {
            let e: f64 = to_real(&exact[x]);
            let dev = (est.xi[x] - e).abs();
            let z = if est.stderr[x] > 0.0 { dev / est.stderr[x] } else if dev < 1e-12 { 0.0 } else { f64::INFINITY };
            worst = worst.max(z);
            r.check(z <= 3.0, || format!("L=6 x={:?}: {} +- {} vs exact {e}", t6.coords(x), est.xi[x], est.stderr[x]));
        }
        r.note(format!("L=6: worst deviation {worst:.2} stderr"));
        let t64 = Torus::even(2, 64)?;
        let est = worm::worm_run(&t64, 100_000, 1000, SEED + 501)?;
        let prof = worm::decay_profile(&t64, &est, 16, 3)?;
        match prof.exponent {
            Some((a, e)) => {
                r.check((-0.7..=-0.3).contains(&a), || format!("d=2 L=64 exponent {a}"));
                r.note(format!("d=2 L=64: exponent {a:.3} +- {e:.3}"));
            }
            None => r.check(false, || "d=2 L=64: no exponent fitted".into()),
        }
        let t16 = Torus::even(3, 16)?;
        let est = worm::worm_run(&t16, 50_000, 1000, SEED + 502)?;
        let prof = worm::decay_profile(&t16, &est, 4, 1)?;
        r.check(prof.min_ratio > 0.5, || format!("d=3 L=16 min ratio {}", prof.min_ratio));
        r.note(format!("d=3 L=16: min Xi(n e1)/Xi(e1) over n <= 4 is {:.4}", prof.min_ratio));
        Ok(r)
    }

    fn counters(&self) -> Result<Report> {
        let mut points = vec![(1, 4), (1, 6), (1, 8), (2, 4), (2, 6)];
        if self.tier >= Tier::Full {
            points.extend([(2, 8), (3, 4)]);
        }
        let mut r = Report::new();
        for (d, l) in points {
            let t = Torus::even(d, l)?;
            let mut reps: Vec<usize> = Vec::new();
            let mut seen = std::collections::HashSet::new();
            for x in 0..t.n() {
                if seen.insert(t.orbit_key(x)) {
                    reps.push(x);
                }
            }
            let mut sets: Vec<Vec<usize>> = vec![vec![]];
            // Removed pairs at d = 3 cost minutes per count.
            if d < 3 {
                sets.extend(reps.iter().filter(|&&x| x != 0 && t.is_odd(x)).map(|&x| vec![0, x]));
            }
            for s in sets {
                let a = dimer::count_covers(&t, &s, Counter::Backtracking)?;
                let b = dimer::count_covers(&t, &s, Counter::Transfer)?;
                r.check(a == b, || format!("({d},{l}) removed {s:?}: backtracking {a}, transfer {b}"));
                if s.is_empty() {
                    r.note(format!("({d},{l}): |D(empty)| = {b}"));
                }
            }
        }
        Ok(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SpecCheck {
    HighFrequency,
    Symmetries,
    Infrared,
}
