//! Positive and vector measures on the interval prering.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::piecewise::PiecewiseFunc;
use crate::prering::{Interval, SimpleSet};
use crate::rational::{self, Rational};
use crate::report::Report;
use crate::surd::{Magnitude, SurdSum};
use crate::vector::QVector;

/// A nonnegative, finitely valued measure on bounded intervals.
#[derive(Debug, Clone, PartialEq)]
pub enum Measure {
    /// `v(I) = b - a`.
    Riemann,
    /// `v(I) = g(b) - g(a)` for a nondecreasing generator `g`; intervals
    /// with an endpoint in `excluded` are not in the prering.
    Stieltjes {
        generator: PiecewiseFunc,
        excluded: BTreeSet<Rational>,
    },
    Dirac(Rational),
    /// Point masses on singletons.
    Counting(BTreeMap<Rational, Rational>),
    /// Probability distribution with cumulative function `F`, `F(-inf)=0`,
    /// `F(+inf)=1`; bounded intervals are valued by increments of `F`.
    Distribution(PiecewiseFunc),
}

const MONOTONE_GRID: i64 = 32;

fn check_nondecreasing(g: &PiecewiseFunc) -> Result<()> {
    if g.dim() != 1 {
        return Err(Error::InvalidMeasure(
            "generator must be real valued".into(),
        ));
    }
    let (lo, hi) = g.bounds();
    let mut prev: Option<Rational> = None;
    for k in 0..=MONOTONE_GRID {
        let x = &lo + (&hi - &lo) * rational::frac(k, MONOTONE_GRID);
        let y = g.eval_exact(&x)?.0.remove(0);
        if let Some(p) = &prev {
            if &y < p {
                return Err(Error::InvalidMeasure(format!(
                    "generator decreases before {x}"
                )));
            }
        }
        prev = Some(y);
    }
    for x in g.breakpoints() {
        for side in [crate::expr::Side::Left, crate::expr::Side::Right] {
            let d = g.one_sided_derivative(&x, side)?;
            if d.exact().is_some_and(|v| v.0[0].is_negative()) {
                return Err(Error::InvalidMeasure(format!("generator decreases at {x}")));
            }
        }
    }
    Ok(())
}

impl Measure {
    /// Stieltjes measure; monotonicity is checked on a rational grid and at
    /// the breakpoints.
    pub fn stieltjes(
        generator: PiecewiseFunc,
        excluded: impl IntoIterator<Item = Rational>,
    ) -> Result<Self> {
        check_nondecreasing(&generator)?;
        Ok(Measure::Stieltjes {
            generator,
            excluded: excluded.into_iter().collect(),
        })
    }

    pub fn counting(weights: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        let weights: BTreeMap<_, _> = weights.into_iter().collect();
        if weights.values().any(Signed::is_negative) {
            return Err(Error::InvalidMeasure("negative point mass".into()));
        }
        Ok(Measure::Counting(weights))
    }

    pub fn distribution(cdf: PiecewiseFunc) -> Result<Self> {
        check_nondecreasing(&cdf)?;
        let (lo, hi) = cdf.bounds();
        let a = cdf.eval_exact(&lo)?.0.remove(0);
        let b = cdf.eval_exact(&hi)?.0.remove(0);
        if a.is_negative() || b > Rational::one() {
            return Err(Error::InvalidMeasure(
                "distribution range must lie in [0,1]".into(),
            ));
        }
        Ok(Measure::Distribution(cdf))
    }

    pub fn eval_interval(&self, i: &Interval) -> Result<Rational> {
        if i.is_empty() {
            return Ok(Rational::zero());
        }
        match self {
            Measure::Riemann => Ok(i.length()),
            Measure::Stieltjes {
                generator,
                excluded,
            } => {
                for e in [i.lo(), i.hi()] {
                    if excluded.contains(e) {
                        return Err(Error::StieltjesEndpointExcluded(e.clone()));
                    }
                }
                increment(generator, i)
            }
            Measure::Dirac(x0) => Ok(if i.contains(x0) {
                Rational::one()
            } else {
                Rational::zero()
            }),
            Measure::Counting(w) => Ok(w
                .range(i.lo().clone()..=i.hi().clone())
                .filter(|(x, _)| i.contains(x))
                .map(|(_, m)| m.clone())
                .sum()),
            Measure::Distribution(cdf) => increment(cdf, i),
        }
    }

    pub fn eval(&self, s: &SimpleSet) -> Result<Rational> {
        s.parts().iter().map(|p| self.eval_interval(p)).sum()
    }

    /// Mass of `(-inf, a]` under a distribution measure.
    pub fn lower_tail(&self, a: &Rational) -> Result<Rational> {
        match self {
            Measure::Distribution(cdf) => Ok(cdf.eval_exact(a)?.0.remove(0)),
            _ => Err(Error::InvalidMeasure(
                "tails exist only for distributions".into(),
            )),
        }
    }

    /// Mass of `(b, +inf)` under a distribution measure.
    pub fn upper_tail(&self, b: &Rational) -> Result<Rational> {
        match self {
            Measure::Distribution(cdf) => Ok(Rational::one() - cdf.eval_exact(b)?.0.remove(0)),
            _ => Err(Error::InvalidMeasure(
                "tails exist only for distributions".into(),
            )),
        }
    }
}

fn increment(g: &PiecewiseFunc, i: &Interval) -> Result<Rational> {
    let a = g.eval_exact(i.lo())?;
    let b = g.eval_exact(i.hi())?;
    Ok(&b.0[0] - &a.0[0])
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Measure::Riemann => write!(f, "riemann"),
            Measure::Stieltjes { .. } => write!(f, "stieltjes"),
            Measure::Dirac(x) => write!(f, "dirac:{x}"),
            Measure::Counting(w) => write!(f, "counting({} atoms)", w.len()),
            Measure::Distribution(_) => write!(f, "distribution"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum VectorRule {
    /// `mu(I) = f(b) - f(a)`.
    IncrementOf(PiecewiseFunc),
    WeightedAtoms(BTreeMap<Rational, QVector>),
}

/// Additive set function into Q^d with a declared domination constant `m`,
/// `|mu(A)| <= m v(A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorMeasure {
    dim: usize,
    rule: VectorRule,
    domination: Rational,
}

impl VectorMeasure {
    pub fn increment_of(f: PiecewiseFunc, domination: Rational) -> Self {
        VectorMeasure {
            dim: f.dim(),
            rule: VectorRule::IncrementOf(f),
            domination,
        }
    }

    pub fn weighted_atoms(
        dim: usize,
        atoms: BTreeMap<Rational, QVector>,
        domination: Rational,
    ) -> Result<Self> {
        if let Some(bad) = atoms.values().find(|v| v.dim() != dim) {
            return Err(Error::DimMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(VectorMeasure {
            dim,
            rule: VectorRule::WeightedAtoms(atoms),
            domination,
        })
    }

    /// Lebesgue length as a one-dimensional vector measure.
    pub fn riemann(domain: Interval) -> Result<Self> {
        let id = PiecewiseFunc::polynomial(domain, vec![crate::poly::Poly::x()])?;
        Ok(Self::increment_of(id, Rational::one()))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domination(&self) -> &Rational {
        &self.domination
    }

    pub fn rule(&self) -> &VectorRule {
        &self.rule
    }

    pub fn eval_interval(&self, i: &Interval) -> Result<QVector> {
        if i.is_empty() {
            return Ok(QVector::zeros(self.dim));
        }
        match &self.rule {
            VectorRule::IncrementOf(f) => f.eval_exact(i.hi())?.sub(&f.eval_exact(i.lo())?),
            VectorRule::WeightedAtoms(atoms) => {
                let mut acc = QVector::zeros(self.dim);
                for (_, v) in atoms
                    .range(i.lo().clone()..=i.hi().clone())
                    .filter(|(x, _)| i.contains(x))
                {
                    acc.add_assign(v);
                }
                Ok(acc)
            }
        }
    }

    pub fn eval(&self, s: &SimpleSet) -> Result<QVector> {
        let mut acc = QVector::zeros(self.dim);
        for p in s.parts() {
            acc.add_assign(&self.eval_interval(p)?);
        }
        Ok(acc)
    }

    /// Whether `|mu(A)|^2 <= (m v(A))^2` on every probe.
    pub fn dominated_on(&self, base: &Measure, probes: &[SimpleSet]) -> Result<bool> {
        for a in probes {
            let lhs = self.eval(a)?.norm_sq();
            let rhs = &self.domination * base.eval(a)?;
            if lhs > &rhs * &rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Anything valued additively on simple sets.
pub trait SetFunction {
    fn value(&self, s: &SimpleSet) -> Result<QVector>;
}

impl SetFunction for Measure {
    fn value(&self, s: &SimpleSet) -> Result<QVector> {
        Ok(QVector::scalar(self.eval(s)?))
    }
}

impl SetFunction for VectorMeasure {
    fn value(&self, s: &SimpleSet) -> Result<QVector> {
        self.eval(s)
    }
}

type PieceFn = Arc<dyn Fn(usize) -> SimpleSet + Send + Sync>;
type TailFn = Arc<dyn Fn(usize) -> Rational + Send + Sync>;

#[derive(Clone)]
pub enum Pieces {
    Finite(Vec<SimpleSet>),
    /// Piece `n` for `n = 0, 1, ...`; `tail_bound(n)` bounds the measure of
    /// everything not covered by the first `n` pieces.
    Generated {
        piece: PieceFn,
        tail_bound: TailFn,
    },
}

impl fmt::Debug for Pieces {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pieces::Finite(p) => f.debug_tuple("Finite").field(p).finish(),
            Pieces::Generated { .. } => f.write_str("Generated(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub target: SimpleSet,
    pub pieces: Pieces,
}

impl Decomposition {
    pub fn finite(target: SimpleSet, pieces: Vec<SimpleSet>) -> Self {
        Decomposition {
            target,
            pieces: Pieces::Finite(pieces),
        }
    }

    pub fn generated(
        target: SimpleSet,
        piece: impl Fn(usize) -> SimpleSet + Send + Sync + 'static,
        tail_bound: impl Fn(usize) -> Rational + Send + Sync + 'static,
    ) -> Self {
        Decomposition {
            target,
            pieces: Pieces::Generated {
                piece: Arc::new(piece),
                tail_bound: Arc::new(tail_bound),
            },
        }
    }

    /// `[0,1) = ⋃_n [1 - 2^-n, 1 - 2^-(n+1))` with the Lebesgue tail `2^-n`.
    pub fn dyadic_unit() -> Self {
        Self::dyadic_unit_with_tail(|n| rational::pow2(-(n as i32)))
    }

    pub fn dyadic_unit_with_tail(tail: impl Fn(usize) -> Rational + Send + Sync + 'static) -> Self {
        let target = SimpleSet::from_interval(
            Interval::closed_open(Rational::zero(), Rational::one()).expect("valid"),
        );
        Self::generated(
            target,
            |n| {
                let n = n as i32;
                let lo = Rational::one() - rational::pow2(-n);
                let hi = Rational::one() - rational::pow2(-n - 1);
                SimpleSet::from_interval(Interval::closed_open(lo, hi).expect("ordered"))
            },
            tail,
        )
    }

    fn first_pieces(&self, n: usize) -> Vec<SimpleSet> {
        match &self.pieces {
            Pieces::Finite(p) => p.iter().take(n).cloned().collect(),
            Pieces::Generated { piece, .. } => (0..n).map(|k| piece(k)).collect(),
        }
    }
}

fn verify_disjoint_inside(target: &SimpleSet, pieces: &[SimpleSet]) -> Result<SimpleSet> {
    let mut union = SimpleSet::empty();
    for (k, p) in pieces.iter().enumerate() {
        if !p.is_subset(target) {
            return Err(Error::NotAPartition(format!("piece {k} leaves the target")));
        }
        if !p.is_disjoint(&union) {
            return Err(Error::NotAPartition(format!(
                "piece {k} overlaps earlier pieces"
            )));
        }
        union = union.union(p);
    }
    Ok(union)
}

/// Exact check of `v(A) = sum_t v(A_t)` for a finite partition.
pub fn check_finite_additivity(v: &dyn SetFunction, d: &Decomposition) -> Result<Report> {
    let start = Instant::now();
    let Pieces::Finite(pieces) = &d.pieces else {
        return Err(Error::InvalidArgument(
            "finite additivity needs finite pieces".into(),
        ));
    };
    let union = verify_disjoint_inside(&d.target, pieces)?;
    if union != d.target {
        return Err(Error::NotAPartition(
            "pieces do not cover the target".into(),
        ));
    }
    let whole = v.value(&d.target)?;
    let mut sum = QVector::zeros(whole.dim());
    for p in pieces {
        sum.add_assign(&v.value(p)?);
    }
    let pass = sum == whole;
    let report = Report::new("finite_additivity", format!("{} pieces", pieces.len()))
        .conclude(
            crate::vector::norm_f64(&sum.to_f64()),
            crate::vector::norm_f64(&whole.to_f64()),
            0.0,
            pass,
        )
        .with_exact_text(sum.to_string(), whole.to_string());
    Ok(Report::timed(start, report))
}

/// Partial-sum certificate for countable additivity.
///
/// Partial sums must be nondecreasing, never exceed `v(target)`, and leave a
/// gap no larger than the declared tail bound.
pub fn check_sigma_additivity(v: &Measure, d: &Decomposition, n_terms: usize) -> Result<Report> {
    let start = Instant::now();
    let pieces = d.first_pieces(n_terms);
    verify_disjoint_inside(&d.target, &pieces)?;
    let whole = v.eval(&d.target)?;
    let mut partial = Rational::zero();
    for p in &pieces {
        partial += v.eval(p)?;
        if partial > whole {
            return Err(Error::NotAPartition(
                "partial sum exceeds the target measure".into(),
            ));
        }
    }
    let bound = match &d.pieces {
        Pieces::Generated { tail_bound, .. } => tail_bound(n_terms),
        Pieces::Finite(p) if n_terms >= p.len() => Rational::zero(),
        Pieces::Finite(_) => whole.clone(),
    };
    let gap = &whole - &partial;
    if gap > bound {
        return Err(Error::TailBoundViolated {
            n_terms,
            gap: Box::new(gap),
            bound: Box::new(bound),
        });
    }
    let report = Report::new("sigma_additivity", format!("{n_terms} terms"))
        .conclude_exact(&partial, &whole, true);
    Ok(Report::timed(start, report))
}

/// Cells `A ∩ [lo, c1), A ∩ [c1, c2), ..., A ∩ [ck, hi]` of `a`.
pub fn cut_partition(a: &SimpleSet, cuts: &[Rational]) -> Vec<SimpleSet> {
    let Some((lo, hi)) = a.span() else {
        return Vec::new();
    };
    let mut inner: Vec<Rational> = cuts
        .iter()
        .filter(|c| &lo < *c && *c <= &hi)
        .cloned()
        .collect();
    inner.sort();
    inner.dedup();
    let mut edges = vec![lo];
    edges.extend(inner);
    let n = edges.len();
    (0..n)
        .map(|k| {
            let cell = if k + 1 < n {
                Interval::closed_open(edges[k].clone(), edges[k + 1].clone())
            } else {
                Interval::closed(edges[k].clone(), hi.clone())
            }
            .expect("sorted edges");
            a.intersect(&SimpleSet::from_interval(cell))
        })
        .collect()
}

/// `sum_t |mu(A_t)|` over the partition induced by `cuts`: a lower bound for
/// the variation `|mu|(A)`, nondecreasing under refinement of the cuts.
pub fn variation_lower_bound(
    mu: &VectorMeasure,
    a: &SimpleSet,
    cuts: &[Rational],
) -> Result<SurdSum> {
    let mut acc = SurdSum::zero();
    for cell in cut_partition(a, cuts) {
        acc = acc.add(&SurdSum::sqrt(mu.eval(&cell)?.norm_sq()));
    }
    Ok(acc)
}

/// `max |mu(A)| / v(A)` over probes, a lower bound for the least
/// domination constant.
pub fn estimate_mu_norm(
    mu: &VectorMeasure,
    base: &Measure,
    probes: &[SimpleSet],
) -> Result<Magnitude> {
    let mut best = Rational::zero();
    for a in probes {
        let va = base.eval(a)?;
        if !va.is_positive() {
            return Err(Error::InvalidArgument(format!(
                "probe {a} has zero base measure"
            )));
        }
        let ratio_sq = mu.eval(a)?.norm_sq() / (&va * &va);
        if ratio_sq > best {
            best = ratio_sq;
        }
    }
    Ok(Magnitude::from_squared(best))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{Expr, Primitive};
    use crate::poly::Poly;
    use crate::rational::{frac, int};

    fn set(s: &str) -> SimpleSet {
        s.parse().unwrap()
    }

    fn square_generator() -> Measure {
        let g = PiecewiseFunc::polynomial(
            "[-10,10]".parse().unwrap(),
            vec![Poly::from_ints(&[0, 0, 1])],
        )
        .unwrap();
        // x^2 decreases on [-10,0]
        assert!(Measure::stieltjes(g, []).is_err());
        let g =
            PiecewiseFunc::polynomial("[0,10]".parse().unwrap(), vec![Poly::from_ints(&[0, 0, 1])])
                .unwrap();
        Measure::stieltjes(g, []).unwrap()
    }

    fn abs_shift() -> PiecewiseFunc {
        let e = Expr::call(Primitive::Abs, Expr::sub(Expr::Var, Expr::Const(int(1))));
        PiecewiseFunc::closed_form("[-5,5]".parse().unwrap(), vec![e]).unwrap()
    }

    #[test]
    fn example_measures() {
        assert_eq!(
            Measure::Riemann.eval(&set("{[0,1],[2,3]}")).unwrap(),
            int(2)
        );
        let dirac = Measure::Dirac(frac(1, 2));
        assert_eq!(dirac.eval(&set("{[0,1/2]}")).unwrap(), int(1));
        assert_eq!(dirac.eval(&set("{[0,1/2)}")).unwrap(), int(0));
        let counting =
            Measure::counting((1..=20).map(|n| (int(n), rational::pow2(-(n as i32))))).unwrap();
        let singles = SimpleSet::normalize((1..=10).map(|n| Interval::singleton(int(n))));
        assert_eq!(counting.eval(&singles).unwrap(), frac(1023, 1024));
    }

    #[test]
    fn stieltjes_excluded_endpoints_refuse() {
        let g = PiecewiseFunc::polynomial("[0,4]".parse().unwrap(), vec![Poly::x()]).unwrap();
        let m = Measure::stieltjes(g, [int(1)]).unwrap();
        assert_eq!(
            m.eval(&set("{[1,2]}")),
            Err(Error::StieltjesEndpointExcluded(int(1)))
        );
        assert_eq!(m.eval(&set("{[0,1/2]}")).unwrap(), frac(1, 2));
    }

    #[test]
    fn vector_measure_examples() {
        let f = PiecewiseFunc::polynomial(
            "[-5,5]".parse().unwrap(),
            vec![Poly::x(), Poly::from_ints(&[0, 2])],
        )
        .unwrap();
        let mu = VectorMeasure::increment_of(f, int(3));
        assert_eq!(
            mu.eval(&set("{[0,1]}")).unwrap(),
            QVector::from_ints(&[1, 2])
        );
        assert_eq!(mu.eval(&SimpleSet::empty()).unwrap(), QVector::zeros(2));
        let kink = VectorMeasure::increment_of(abs_shift(), int(1));
        assert_eq!(
            kink.eval(&set("{[0,2]}")).unwrap(),
            QVector::from_ints(&[0])
        );
    }

    #[test]
    fn finite_additivity_examples() {
        let d = Decomposition::finite(set("{[0,1]}"), vec![set("{[0,1/2)}"), set("{[1/2,1]}")]);
        assert!(check_finite_additivity(&Measure::Riemann, &d)
            .unwrap()
            .passed());
        let d = Decomposition::finite(set("{[0,1]}"), vec![set("{[0,1/2)}")]);
        assert!(matches!(
            check_finite_additivity(&Measure::Riemann, &d),
            Err(Error::NotAPartition(_))
        ));
        let d = Decomposition::finite(set("{[1,2]}"), vec![set("{[1,3/2)}"), set("{[3/2,2]}")]);
        let r = check_finite_additivity(&square_generator(), &d).unwrap();
        assert!(r.passed());
        assert_eq!(r.conclusion.rhs_exact.as_deref(), Some("3"));
        assert_eq!(
            square_generator().eval(&set("{[1,3/2)}")).unwrap(),
            frac(5, 4)
        );
    }

    #[test]
    fn sigma_additivity_examples() {
        let r =
            check_sigma_additivity(&Measure::Riemann, &Decomposition::dyadic_unit(), 20).unwrap();
        assert_eq!(r.conclusion.lhs_exact.as_deref(), Some("1048575/1048576"));
        let single = Decomposition::generated(set("{[0,1]}"), |_| set("{[0,1]}"), |_| int(0));
        assert!(check_sigma_additivity(&Measure::Riemann, &single, 1)
            .unwrap()
            .passed());
        // 1/2 lies in the second dyadic piece [1/2, 3/4)
        let dirac = Measure::Dirac(frac(1, 2));
        let d = Decomposition::dyadic_unit_with_tail(|n| if n >= 2 { int(0) } else { int(1) });
        let r = check_sigma_additivity(&dirac, &d, 2).unwrap();
        assert_eq!(r.conclusion.lhs_exact.as_deref(), Some("1"));
        let strict = Decomposition::dyadic_unit_with_tail(|_| int(0));
        assert!(matches!(
            check_sigma_additivity(&dirac, &strict, 1),
            Err(Error::TailBoundViolated { .. })
        ));
    }

    #[test]
    fn variation_bounds() {
        let mu = VectorMeasure::increment_of(abs_shift(), int(1));
        let a = set("{[0,2]}");
        assert!(variation_lower_bound(&mu, &a, &[]).unwrap().is_zero());
        assert_eq!(
            variation_lower_bound(&mu, &a, &[int(1)])
                .unwrap()
                .as_rational(),
            Some(int(2))
        );
        assert!(variation_lower_bound(&mu, &SimpleSet::empty(), &[int(1)])
            .unwrap()
            .is_zero());
        let id = VectorMeasure::riemann("[0,1]".parse().unwrap()).unwrap();
        let u = set("{[0,1]}");
        for cuts in [
            vec![],
            vec![frac(1, 3)],
            vec![frac(1, 5), frac(1, 2), frac(7, 8)],
        ] {
            assert_eq!(
                variation_lower_bound(&id, &u, &cuts).unwrap().as_rational(),
                Some(int(1))
            );
        }
    }

    #[test]
    fn mu_norm_estimates() {
        let f =
            PiecewiseFunc::polynomial("[-5,5]".parse().unwrap(), vec![Poly::from_ints(&[0, 3])])
                .unwrap();
        let mu = VectorMeasure::increment_of(f, int(3));
        assert_eq!(
            estimate_mu_norm(&mu, &Measure::Riemann, &[set("{[0,1]}")])
                .unwrap()
                .as_rational(),
            Some(int(3))
        );
        let kink = VectorMeasure::increment_of(abs_shift(), int(1));
        assert!(
            estimate_mu_norm(&kink, &Measure::Riemann, &[set("{[0,2]}")])
                .unwrap()
                .as_rational()
                == Some(int(0))
        );
        assert_eq!(
            estimate_mu_norm(&kink, &Measure::Riemann, &[set("{[0,1]}")])
                .unwrap()
                .as_rational(),
            Some(int(1))
        );
        let zero = VectorMeasure::weighted_atoms(1, BTreeMap::new(), int(0)).unwrap();
        assert!(
            estimate_mu_norm(&zero, &Measure::Riemann, &[set("{[0,1]}")])
                .unwrap()
                .as_rational()
                == Some(int(0))
        );
    }
}
