//! The seeded battery behind `suite`: fixed instances with known answers
//! plus randomized families, run through the data-parallel executor and
//! merged by instance id.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{
    check_antiderivative_uniqueness, check_cartan, check_constancy, check_ftc,
    check_lipschitz_char, check_lipschitz_representation, check_nondecreasing, check_second_ftc,
    check_strong_mvt, check_translation_invariance, MvtInstance, DEFAULT_SAMPLES,
};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::expr::{Expr, Primitive};
use crate::measures::{self, Decomposition, Measure};
use crate::piecewise::PiecewiseFunc;
use crate::poly::Poly;
use crate::prering::Interval;
use crate::random::{self, rng_for};
use crate::rational::{self, frac, int, Rational};
use crate::report::{Report, SCHEMA_VERSION};
use crate::riesz;
use crate::tensor;
use crate::vector::QVector;

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Randomized instances per family.
    pub per_family: usize,
    /// Premise sample count per check.
    pub samples: usize,
    pub exec: Execution,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 42,
            per_family: 25,
            samples: DEFAULT_SAMPLES,
            exec: Execution::Parallel,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The instance did not meet the hypotheses; not a violation.
    PremiseFailed,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub id: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutput {
    pub schema: u32,
    pub seed: u64,
    pub entries: Vec<SuiteEntry>,
    pub pass: bool,
}

impl SuiteOutput {
    /// Copy with every runtime field zeroed, for byte comparisons.
    pub fn without_runtime(&self) -> SuiteOutput {
        let mut out = self.clone();
        for e in &mut out.entries {
            if let Some(r) = &mut e.report {
                r.runtime_ms = 0.0;
            }
        }
        out
    }

    pub fn count(&self, status: Status) -> usize {
        self.entries.iter().filter(|e| e.status == status).count()
    }
}

type Check = Box<dyn Fn(&SuiteConfig) -> Result<Report> + Send + Sync>;

struct Job {
    id: String,
    run: Check,
}

fn job(
    id: impl Into<String>,
    run: impl Fn(&SuiteConfig) -> Result<Report> + Send + Sync + 'static,
) -> Job {
    Job {
        id: id.into(),
        run: Box::new(run),
    }
}

fn iv(s: &str) -> Interval {
    s.parse().expect("literal interval")
}

fn poly_fn(domain: &str, coords: Vec<Poly>) -> PiecewiseFunc {
    PiecewiseFunc::polynomial(iv(domain), coords).expect("literal function")
}

fn closed(domain: Interval, coords: Vec<Expr>) -> PiecewiseFunc {
    PiecewiseFunc::closed_form(domain, coords).expect("literal function")
}

fn abs_shift(domain: &str, shift: i64) -> PiecewiseFunc {
    closed(
        iv(domain),
        vec![Expr::call(
            Primitive::Abs,
            Expr::Poly(Poly::from_ints(&[-shift, 1])),
        )],
    )
}

fn half_pi() -> Rational {
    rational::from_f64(std::f64::consts::FRAC_PI_2).expect("finite")
}

fn fixed_jobs() -> Vec<Job> {
    vec![
        job("cartan/parabola", |c| {
            let f = poly_fn("[0,1]", vec![Poly::from_ints(&[0, 0, 1]), Poly::x()]);
            let g = poly_fn("[0,1]", vec![Poly::from_ints(&[0, 3])]);
            check_cartan(
                &MvtInstance::new("parabola", f, g, iv("[0,1]"), [])?,
                c.samples,
            )
        }),
        job("mvt/quarter-circle", |c| {
            let dom = Interval::closed(int(0), half_pi())?;
            let f = closed(
                dom.clone(),
                vec![
                    Expr::call(Primitive::Cos, Expr::Var),
                    Expr::call(Primitive::Sin, Expr::Var),
                ],
            );
            let g = poly_fn("[0,2]", vec![Poly::x()]);
            check_strong_mvt(
                &MvtInstance::new("quarter-circle", f, g, dom, [])?,
                c.samples,
            )
        }),
        job("mvt/abs-kink", |c| {
            let g = poly_fn("[0,2]", vec![Poly::x()]);
            check_strong_mvt(
                &MvtInstance::new("abs-kink", abs_shift("[0,2]", 1), g, iv("[0,2]"), [int(1)])?,
                c.samples,
            )
        }),
        job("nondecreasing/riesz-partial", |c| {
            let cover = riesz::cantor_null_cover(3)?;
            let g = riesz::riesz_partial(&cover, &iv("[0,1]"), 12)?;
            check_nondecreasing(
                &g,
                &iv("[0,1]"),
                &g.breakpoints().into_iter().collect(),
                c.samples,
            )
        }),
        job("nondecreasing/cubic", |c| {
            let g = poly_fn("[-1,1]", vec![Poly::from_ints(&[0, 0, 0, 1])]);
            check_nondecreasing(&g, &iv("[-1,1]"), &BTreeSet::new(), c.samples)
        }),
        job("constancy/split-constant", |c| {
            let f = PiecewiseFunc::from_poly_knots(
                &[int(0), int(1), int(2)],
                vec![vec![Poly::from_ints(&[2]), Poly::from_ints(&[-1])]; 2],
            )?;
            check_constancy(&f, &iv("[0,2]"), &[int(1)].into(), c.samples)
        }),
        job("lipschitz-char/circle", |c| {
            let dom = iv("[-2,3]");
            let f = closed(
                dom.clone(),
                vec![
                    Expr::call(Primitive::Cos, Expr::Var),
                    Expr::call(Primitive::Sin, Expr::Var),
                ],
            );
            check_lipschitz_char(&f, &dom, &int(1), &BTreeSet::new(), c.samples)
        }),
        job("antiderivative/abs-plus-5", |c| {
            let f2 = abs_shift("[-1,1]", 0).offset(&QVector::from_ints(&[5]));
            check_antiderivative_uniqueness(
                &abs_shift("[-1,1]", 0),
                &f2,
                &iv("[-1,1]"),
                &[int(0)].into(),
                c.samples,
            )
        }),
        job("ftc/abs", |_| {
            check_ftc(&abs_shift("[-1,2]", 0), &int(-1), &int(2), &[int(0)].into())
        }),
        job("ftc/sin-cos", |_| {
            let f = closed(
                iv("[0,1]"),
                vec![
                    Expr::call(Primitive::Sin, Expr::Var),
                    Expr::call(Primitive::Cos, Expr::Var),
                ],
            );
            check_ftc(&f, &int(0), &int(1), &BTreeSet::new())
        }),
        job("translation/sin", |_| {
            let f = closed(iv("[-3,3]"), vec![Expr::call(Primitive::Sin, Expr::Var)]);
            check_translation_invariance(&f, &int(0), &int(2), &frac(1, 2))
        }),
        job("second-ftc/step", |_| {
            let g = PiecewiseFunc::from_poly_knots(
                &[int(0), int(1), int(2)],
                vec![vec![Poly::from_ints(&[1])], vec![Poly::from_ints(&[3])]],
            )?;
            check_second_ftc(&g, &int(0), &[int(1), frac(1, 2), frac(3, 2)])
        }),
        job("lipschitz-rep/zigzag", |c| {
            let knots = [int(0), int(1), int(2), int(3)];
            let lin = |a: i64, b: i64| Poly::from_ints(&[a, b]);
            let f = PiecewiseFunc::from_poly_knots(
                &knots,
                vec![
                    vec![lin(0, 3), lin(0, 4)],
                    vec![lin(6, -3), lin(8, -4)],
                    vec![lin(-6, 3), lin(-8, 4)],
                ],
            )?;
            check_lipschitz_representation(&f, &int(5), &iv("[0,3]"), c.samples.min(64))
        }),
        job("riesz/blowup-quarter", |c| {
            let cover = riesz::cantor_null_cover(5)?;
            let t = frac(1, 4);
            let w = riesz::blowup_witness(&cover, &t, cover.len().unwrap_or(0))?;
            riesz::verify_blowup(&cover, &t, &w, c.samples.min(64))
        }),
        job("sigma-additivity/dyadic", |_| {
            measures::check_sigma_additivity(&Measure::Riemann, &Decomposition::dyadic_unit(), 40)
        }),
        job("tensor/unit-square-grid", |_| {
            let target = tensor::Cube::half_open(&[(int(0), int(1)), (int(0), int(1))])?;
            let mut rng = rng_for(0, 0);
            let cells = random::rand_grid_partition(&mut rng, &target, 4);
            tensor::check_tensor_additivity(&target, &cells, &[Measure::Riemann, Measure::Riemann])
        }),
    ]
}

fn random_jobs(cfg: &SuiteConfig) -> Vec<Job> {
    let seed = cfg.seed;
    let mut jobs = Vec::new();
    for i in 0..cfg.per_family {
        let stream = i as u64;
        jobs.push(job(format!("mvt/poly/{i:04}"), move |c| {
            let mut rng = rng_for(seed, stream);
            let f = random::rand_continuous_piecewise_poly(&mut rng, 2, &int(-1), &int(2), 3, 2);
            let m = f.lipschitz_bound().expect("polynomial pieces");
            let slope = m + random::rand_rational(&mut rng, 0, 1, 4);
            let g = PiecewiseFunc::polynomial(
                f.domain(),
                vec![Poly::new(vec![rational::zero(), slope])],
            )?;
            let corners = f.breakpoints();
            check_strong_mvt(
                &MvtInstance::new("poly", f, g, iv("[-1,2]"), corners)?,
                c.samples,
            )
        }));
        jobs.push(job(format!("mvt/trig/{i:04}"), move |c| {
            let mut rng = rng_for(seed, 1 << 32 | stream);
            let r = random::rand_rational(&mut rng, 1, 3, 4);
            let w = random::rand_rational(&mut rng, 1, 2, 2);
            // f(t) = r (cos wt, sin wt) has speed r w.
            let arg = || Expr::Poly(Poly::new(vec![rational::zero(), w.clone()]));
            let scaled = |p| Expr::mul(Expr::constant(r.clone()), Expr::call(p, arg()));
            let dom = iv("[0,2]");
            let f = closed(
                dom.clone(),
                vec![scaled(Primitive::Cos), scaled(Primitive::Sin)],
            );
            let g = PiecewiseFunc::polynomial(
                dom.clone(),
                vec![Poly::new(vec![rational::zero(), &r * &w])],
            )?;
            check_strong_mvt(&MvtInstance::new("trig", f, g, dom, [])?, c.samples)
        }));
        jobs.push(job(format!("ftc/poly/{i:04}"), move |_| {
            let mut rng = rng_for(seed, 2 << 32 | stream);
            let f = random::rand_continuous_piecewise_poly(&mut rng, 2, &int(-2), &int(2), 4, 3);
            let (t1, t2) = random::rand_distinct_pair(&mut rng, &int(-2), &int(2), 48);
            check_ftc(&f, &t1, &t2, &f.breakpoints().into_iter().collect())
        }));
        jobs.push(job(format!("translation/poly/{i:04}"), move |_| {
            let mut rng = rng_for(seed, 3 << 32 | stream);
            let f = random::rand_continuous_piecewise_poly(&mut rng, 1, &int(-3), &int(3), 3, 3);
            let h = random::rand_rational(&mut rng, -1, 1, 8);
            let (t1, t2) = random::rand_distinct_pair(&mut rng, &int(-2), &int(2), 32);
            check_translation_invariance(&f, &t1, &t2, &h)
        }));
        jobs.push(job(format!("lipschitz-rep/pl/{i:04}"), move |c| {
            let mut rng = rng_for(seed, 4 << 32 | stream);
            let f = random::rand_pl_r2(&mut rng, &int(0), &int(2), 5);
            let m = f.lipschitz_bound().expect("linear pieces");
            check_lipschitz_representation(&f, &m, &iv("[0,2]"), c.samples.min(64))
        }));
    }
    jobs
}

/// Runs the whole battery. Entries come back sorted by id regardless of
/// the executor.
pub fn run_suite(cfg: &SuiteConfig) -> SuiteOutput {
    let mut jobs = fixed_jobs();
    jobs.extend(random_jobs(cfg));
    let mut entries = exec::map_slice(cfg.exec, &jobs, |j| {
        let (status, report, detail) = match (j.run)(cfg) {
            Ok(r) if r.passed() => (Status::Pass, Some(r.summary()), None),
            Ok(r) => (Status::Fail, Some(r.summary()), None),
            Err(e @ Error::PremiseFailed(_)) => (Status::PremiseFailed, None, Some(e.to_string())),
            Err(e) => (Status::Error, None, Some(e.to_string())),
        };
        SuiteEntry {
            id: j.id.clone(),
            status,
            report,
            detail,
        }
    });
    entries.sort_by(|a, b| a.id.cmp(&b.id));
    let pass = entries
        .iter()
        .all(|e| matches!(e.status, Status::Pass | Status::PremiseFailed));
    SuiteOutput {
        schema: SCHEMA_VERSION,
        seed: cfg.seed,
        entries,
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_battery_passes_and_is_deterministic() {
        let cfg = SuiteConfig {
            seed: 9,
            per_family: 3,
            samples: 32,
            exec: Execution::Parallel,
        };
        let a = run_suite(&cfg);
        for e in &a.entries {
            assert!(
                matches!(e.status, Status::Pass),
                "{}: {:?} {:?}",
                e.id,
                e.status,
                e.detail
            );
        }
        let b = run_suite(&SuiteConfig {
            exec: Execution::Sequential,
            ..cfg
        });
        assert_eq!(a.without_runtime(), b.without_runtime());
    }
}
