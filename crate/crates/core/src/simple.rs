//! Simple functions `h = y_1 c_{A_1} + ... + y_k c_{A_k}` with disjoint
//! carriers `A_i` and coefficients in Q^d, together with their elementary
//! integrals.

use std::collections::BTreeMap;
use std::time::Instant;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{Measure, VectorMeasure};
use crate::piecewise::{PiecewiseFunc, Value};
use crate::prering::{self, Interval, SimpleSet};
use crate::rational::{self, Rational};
use crate::report::Report;
use crate::surd::{Magnitude, SurdSum};
use crate::vector::QVector;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub coeff: QVector,
    pub carrier: SimpleSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSimpleFunction")]
pub struct SimpleFunction {
    dim: usize,
    terms: Vec<Term>,
}

#[derive(Deserialize)]
struct RawSimpleFunction {
    dim: usize,
    terms: Vec<Term>,
}

impl TryFrom<RawSimpleFunction> for SimpleFunction {
    type Error = Error;

    fn try_from(raw: RawSimpleFunction) -> Result<Self> {
        SimpleFunction::new(raw.dim, raw.terms.into_iter().map(|t| (t.coeff, t.carrier)))
    }
}

impl SimpleFunction {
    /// Keeps the given representation; carriers must be pairwise disjoint.
    pub fn new(dim: usize, terms: impl IntoIterator<Item = (QVector, SimpleSet)>) -> Result<Self> {
        let mut out: Vec<Term> = Vec::new();
        for (coeff, carrier) in terms {
            if coeff.dim() != dim {
                return Err(Error::DimMismatch {
                    expected: dim,
                    found: coeff.dim(),
                });
            }
            if carrier.is_empty() {
                continue;
            }
            if out.iter().any(|t| !t.carrier.is_disjoint(&carrier)) {
                return Err(Error::OverlappingCarriers);
            }
            out.push(Term { coeff, carrier });
        }
        Ok(SimpleFunction { dim, terms: out })
    }

    pub fn zero(dim: usize) -> Self {
        SimpleFunction {
            dim,
            terms: Vec::new(),
        }
    }

    /// Real-valued indicator `c_A`.
    pub fn indicator(a: SimpleSet) -> Self {
        Self::constant_on(QVector::scalar(rational::one()), a)
    }

    pub fn constant_on(coeff: QVector, a: SimpleSet) -> Self {
        let dim = coeff.dim();
        Self::new(dim, [(coeff, a)]).expect("single carrier")
    }

    /// Real-valued from `(coefficient, carrier)` pairs.
    pub fn real(terms: impl IntoIterator<Item = (Rational, SimpleSet)>) -> Result<Self> {
        Self::new(1, terms.into_iter().map(|(c, a)| (QVector::scalar(c), a)))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn support(&self) -> SimpleSet {
        self.terms
            .iter()
            .fold(SimpleSet::empty(), |acc, t| acc.union(&t.carrier))
    }

    pub fn eval(&self, x: &Rational) -> QVector {
        self.terms
            .iter()
            .find(|t| t.carrier.contains(x))
            .map_or_else(|| QVector::zeros(self.dim), |t| t.coeff.clone())
    }

    /// Values on the cells of the common refinement of the carriers of all
    /// `fs`; cells outside every carrier are omitted.
    fn cellwise(fs: &[&SimpleFunction]) -> Vec<(Interval, Vec<QVector>)> {
        let mut sets = Vec::new();
        let mut owner = Vec::new();
        for (fi, f) in fs.iter().enumerate() {
            for t in &f.terms {
                sets.push(t.carrier.clone());
                owner.push((fi, t.coeff.clone()));
            }
        }
        prering::refine_with_membership(&sets)
            .into_iter()
            .map(|cell| {
                let mut vals: Vec<QVector> = fs.iter().map(|f| QVector::zeros(f.dim)).collect();
                for m in cell.members {
                    let (fi, ref c) = owner[m];
                    vals[fi] = c.clone();
                }
                (cell.cell, vals)
            })
            .collect()
    }

    fn from_cells(dim: usize, cells: impl IntoIterator<Item = (Interval, QVector)>) -> Self {
        let mut groups: BTreeMap<QVector, Vec<Interval>> = BTreeMap::new();
        for (cell, coeff) in cells {
            if !coeff.is_zero() {
                groups.entry(coeff).or_default().push(cell);
            }
        }
        let mut terms: Vec<Term> = groups
            .into_iter()
            .map(|(coeff, cells)| Term {
                coeff,
                carrier: SimpleSet::normalize(cells),
            })
            .collect();
        terms.sort_by(|a, b| {
            let ka = &a.carrier.parts()[0];
            let kb = &b.carrier.parts()[0];
            ka.lo()
                .cmp(kb.lo())
                .then_with(|| kb.lo_closed().cmp(&ka.lo_closed()))
        });
        SimpleFunction { dim, terms }
    }

    /// Canonical representation: one term per distinct nonzero value.
    pub fn canonical(&self) -> SimpleFunction {
        Self::from_cells(
            self.dim,
            Self::cellwise(&[self])
                .into_iter()
                .map(|(cell, mut v)| (cell, v.remove(0))),
        )
    }

    /// Equality as functions, independent of representation.
    pub fn same_function(&self, other: &SimpleFunction) -> bool {
        self.dim == other.dim && self.canonical() == other.canonical()
    }

    fn check_dim(&self, other: &SimpleFunction) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &SimpleFunction) -> Result<SimpleFunction> {
        self.check_dim(other)?;
        let cells = Self::cellwise(&[self, other])
            .into_iter()
            .map(|(cell, v)| (cell, v[0].add(&v[1]).expect("same dim")));
        Ok(Self::from_cells(self.dim, cells))
    }

    pub fn scale(&self, c: &Rational) -> SimpleFunction {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        SimpleFunction {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.scale(c),
                    carrier: t.carrier.clone(),
                })
                .collect(),
        }
        .canonical()
    }

    pub fn sub(&self, other: &SimpleFunction) -> Result<SimpleFunction> {
        self.add(&other.scale(&-rational::one()))
    }

    /// Pointwise product of a real simple function with this one.
    pub fn mul_real(&self, g: &SimpleFunction) -> Result<SimpleFunction> {
        if g.dim != 1 {
            return Err(Error::DimMismatch {
                expected: 1,
                found: g.dim,
            });
        }
        let cells = Self::cellwise(&[g, self])
            .into_iter()
            .map(|(cell, v)| (cell, v[1].scale(&v[0].0[0])));
        Ok(Self::from_cells(self.dim, cells))
    }

    /// `|h|`, carriers preserved, coefficients replaced by Euclidean norms.
    pub fn abs(&self) -> NormFunction {
        NormFunction {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    (
                        Magnitude::from_squared(t.coeff.norm_sq()),
                        t.carrier.clone(),
                    )
                })
                .collect(),
        }
    }

    fn lattice(&self, other: &SimpleFunction, take_max: bool) -> Result<SimpleFunction> {
        for f in [self, other] {
            if f.dim != 1 {
                return Err(Error::DimMismatch {
                    expected: 1,
                    found: f.dim,
                });
            }
        }
        let cells = Self::cellwise(&[self, other]).into_iter().map(|(cell, v)| {
            let (a, b) = (&v[0].0[0], &v[1].0[0]);
            let pick = if (a >= b) == take_max { a } else { b };
            (cell, QVector::scalar(pick.clone()))
        });
        Ok(Self::from_cells(1, cells))
    }

    pub fn sup_pointwise(&self, other: &SimpleFunction) -> Result<SimpleFunction> {
        self.lattice(other, true)
    }

    pub fn inf_pointwise(&self, other: &SimpleFunction) -> Result<SimpleFunction> {
        self.lattice(other, false)
    }

    /// `∫ h dv = sum_i y_i v(A_i)`.
    pub fn integral_dv(&self, v: &Measure) -> Result<QVector> {
        let mut acc = QVector::zeros(self.dim);
        for t in &self.terms {
            acc.add_assign(&t.coeff.scale(&v.eval(&t.carrier)?));
        }
        Ok(acc)
    }

    /// `∫ u(h, dmu) = sum_i u(y_i, mu(A_i))`.
    pub fn integral_u_dmu(&self, u: &BilinearOp, mu: &VectorMeasure) -> Result<QVector> {
        if u.left_dim != self.dim {
            return Err(Error::DimMismatch {
                expected: u.left_dim,
                found: self.dim,
            });
        }
        if u.right_dim != mu.dim() {
            return Err(Error::DimMismatch {
                expected: u.right_dim,
                found: mu.dim(),
            });
        }
        let mut acc = QVector::zeros(u.out_dim);
        for t in &self.terms {
            acc.add_assign(&u.apply(&t.coeff, &mu.eval(&t.carrier)?)?);
        }
        Ok(acc)
    }

    /// `||h|| = ∫ |h| dv`, exact as a sum of square roots.
    pub fn seminorm(&self, v: &Measure) -> Result<SurdSum> {
        let mut acc = SurdSum::zero();
        for t in &self.terms {
            acc = acc.add(&SurdSum::term(v.eval(&t.carrier)?, t.coeff.norm_sq()));
        }
        Ok(acc)
    }

    /// Probe points that separate every cell of the carriers of `fs`:
    /// all endpoints, midpoints between them, and one point on each side.
    pub fn probe_points(fs: &[&SimpleFunction]) -> Vec<Rational> {
        let mut pts: Vec<Rational> = fs
            .iter()
            .flat_map(|f| f.terms.iter().flat_map(|t| t.carrier.endpoints()))
            .collect();
        pts.sort();
        pts.dedup();
        let mut out = Vec::with_capacity(2 * pts.len() + 2);
        if let (Some(first), Some(last)) = (pts.first(), pts.last()) {
            out.push(first - rational::one());
            out.push(last + rational::one());
        }
        for w in pts.windows(2) {
            out.push((&w[0] + &w[1]) / rational::int(2));
        }
        out.extend(pts);
        out
    }
}

/// Result of [`SimpleFunction::abs`]: nonnegative real coefficients kept as
/// exact magnitudes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormFunction {
    pub terms: Vec<(Magnitude, SimpleSet)>,
}

impl NormFunction {
    /// Real simple function, when every norm is rational.
    pub fn to_simple(&self) -> Option<SimpleFunction> {
        let terms = self
            .terms
            .iter()
            .map(|(m, a)| m.as_rational().map(|q| (q, a.clone())))
            .collect::<Option<Vec<_>>>()?;
        SimpleFunction::real(terms).ok()
    }

    pub fn integral_dv(&self, v: &Measure) -> Result<SurdSum> {
        let mut acc = SurdSum::zero();
        for (m, a) in &self.terms {
            acc = acc.add(&SurdSum::term(v.eval(a)?, m.squared().clone()));
        }
        Ok(acc)
    }
}

/// Bilinear map `u: Q^d x Q^e -> Q^f` given by coefficients
/// `out_k = sum_{i,j} c[k][i][j] y_i z_j`, with a declared bound `|u|`.
#[derive(Debug, Clone, PartialEq)]
pub struct BilinearOp {
    left_dim: usize,
    right_dim: usize,
    out_dim: usize,
    coeffs: Vec<Rational>,
    bound: Rational,
}

impl BilinearOp {
    pub fn new(
        dims: (usize, usize, usize),
        coeffs: Vec<Rational>,
        bound: Rational,
    ) -> Result<Self> {
        let (d, e, f) = dims;
        if coeffs.len() != d * e * f {
            return Err(Error::InvalidArgument(format!(
                "bilinear map needs {} coefficients, got {}",
                d * e * f,
                coeffs.len()
            )));
        }
        Ok(BilinearOp {
            left_dim: d,
            right_dim: e,
            out_dim: f,
            coeffs,
            bound,
        })
    }

    /// Declares `|u|` as the absolute coefficient sum, a valid operator bound.
    pub fn with_l1_bound(dims: (usize, usize, usize), coeffs: Vec<Rational>) -> Result<Self> {
        let bound = coeffs.iter().map(Signed::abs).sum();
        Self::new(dims, coeffs, bound)
    }

    /// Scalar multiplication `u(y, z) = y z` on reals.
    pub fn scalar() -> Self {
        Self::new((1, 1, 1), vec![rational::one()], rational::one()).expect("valid")
    }

    /// `u(y, z) = y z` for real `y` and `z` in Q^e.
    pub fn scalar_times_vector(e: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); e * e];
        for k in 0..e {
            coeffs[k * e + k] = rational::one();
        }
        Self::new((1, e, e), coeffs, rational::one()).expect("valid")
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.left_dim, self.right_dim, self.out_dim)
    }

    pub fn bound(&self) -> &Rational {
        &self.bound
    }

    pub fn apply(&self, y: &QVector, z: &QVector) -> Result<QVector> {
        if y.dim() != self.left_dim || z.dim() != self.right_dim {
            return Err(Error::DimMismatch {
                expected: self.left_dim + self.right_dim,
                found: y.dim() + z.dim(),
            });
        }
        let (d, e) = (self.left_dim, self.right_dim);
        Ok(QVector(
            (0..self.out_dim)
                .map(|k| {
                    let mut acc = Rational::zero();
                    for i in 0..d {
                        if y.0[i].is_zero() {
                            continue;
                        }
                        for j in 0..e {
                            let c = &self.coeffs[k * d * e + i * e + j];
                            if !c.is_zero() {
                                acc += c * &y.0[i] * &z.0[j];
                            }
                        }
                    }
                    acc
                })
                .collect(),
        ))
    }
}

/// Verifies that two representations of one function give identical
/// elementary integrals.
pub fn check_representation_invariance(
    rep1: &SimpleFunction,
    rep2: &SimpleFunction,
    v: &Measure,
    mu: &VectorMeasure,
    u: &BilinearOp,
) -> Result<Report> {
    let start = Instant::now();
    for x in SimpleFunction::probe_points(&[rep1, rep2]) {
        if rep1.eval(&x) != rep2.eval(&x) {
            return Err(Error::NotSameFunction(x));
        }
    }
    let (a1, a2) = (rep1.integral_dv(v)?, rep2.integral_dv(v)?);
    let (b1, b2) = (rep1.integral_u_dmu(u, mu)?, rep2.integral_u_dmu(u, mu)?);
    let pass = a1 == a2 && b1 == b2;
    let report = Report::new(
        "representation_invariance",
        format!("{} vs {} terms", rep1.terms.len(), rep2.terms.len()),
    )
    .conclude(
        crate::vector::norm_f64(&a1.to_f64()),
        crate::vector::norm_f64(&a2.to_f64()),
        0.0,
        pass,
    )
    .with_exact_text(format!("{a1}; {b1}"), format!("{a2}; {b2}"));
    Ok(Report::timed(start, report))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Approximation {
    pub function: SimpleFunction,
    /// Certified bound on `sup_K |s_n - f|`.
    pub certificate: Rational,
}

/// Step approximation `s_n = sum_j f(x_j) c_{I_j}` on `n` equal subintervals
/// of `k`, sampled at left endpoints. The certificate is `m |K| / n` for a
/// Lipschitz bound `m` of `f` on `K` (polynomial pieces), plus the rounding
/// of any inexact sample.
pub fn approximate_continuous(f: &PiecewiseFunc, k: &Interval, n: usize) -> Result<Approximation> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if k.is_empty() {
        return Ok(Approximation {
            function: SimpleFunction::zero(f.dim()),
            certificate: Rational::zero(),
        });
    }
    let (lo, hi) = (k.lo().clone(), k.hi().clone());
    let m = f
        .lipschitz_bound_on(&lo, &hi)
        .ok_or_else(|| Error::UnknownForm("no Lipschitz bound for closed-form pieces".into()))?;
    let width = (&hi - &lo) / rational::int(n as i64);
    let mut terms = Vec::with_capacity(n);
    let mut rounding = Rational::zero();
    for j in 0..n {
        let a = &lo + &width * rational::int(j as i64);
        let b = &lo + &width * rational::int(j as i64 + 1);
        let last = j + 1 == n;
        let cell = Interval::new(
            a.clone(),
            b,
            if j == 0 { k.lo_closed() } else { true },
            if last { k.hi_closed() } else { false },
        )?
        .intersect(k);
        let coeff = match f.eval(&a)? {
            Value::Exact(v) => v,
            Value::Approx(v) => {
                let q: Vec<Rational> = v
                    .iter()
                    .map(|x| rational::from_f64(*x).ok_or(Error::EvalFailure(*x)))
                    .collect::<Result<_>>()?;
                rounding = rational::max(&rounding, &rational::pow2(-40));
                QVector(q)
            }
        };
        terms.push((coeff, SimpleSet::from_interval(cell)));
    }
    Ok(Approximation {
        function: SimpleFunction::new(f.dim(), terms)?,
        certificate: m * (&hi - &lo) / rational::int(n as i64) + rounding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;
    use crate::rational::{frac, int};

    fn set(s: &str) -> SimpleSet {
        s.parse().unwrap()
    }

    fn h_example() -> SimpleFunction {
        SimpleFunction::real([(int(2), set("{[0,1)}")), (int(5), set("{[1,3)}"))]).unwrap()
    }

    #[test]
    fn evaluation() {
        let h = h_example();
        assert_eq!(h.eval(&int(1)), QVector::from_ints(&[5]));
        assert_eq!(h.eval(&int(7)), QVector::from_ints(&[0]));
        let v = SimpleFunction::constant_on(QVector::from_ints(&[1, -1]), set("{[0,1]}"));
        assert_eq!(v.eval(&frac(1, 2)), QVector::from_ints(&[1, -1]));
        assert!(
            SimpleFunction::real([(int(1), set("{[0,2]}")), (int(1), set("{[1,3]}"))]).is_err()
        );
    }

    #[test]
    fn linear_structure() {
        let a = SimpleFunction::indicator(set("{[0,2]}"));
        let b = SimpleFunction::indicator(set("{[1,3]}"));
        let sum = a.add(&b).unwrap();
        let expected =
            SimpleFunction::real([(int(1), set("{[0,1),(2,3]}")), (int(2), set("{[1,2]}"))])
                .unwrap();
        assert_eq!(sum, expected.canonical());
        assert_eq!(h_example().scale(&int(0)), SimpleFunction::zero(1));
        let h = h_example();
        assert_eq!(h.add(&h.scale(&int(-1))).unwrap(), SimpleFunction::zero(1));
        let wrong = SimpleFunction::zero(2);
        assert!(matches!(h.add(&wrong), Err(Error::DimMismatch { .. })));
    }

    #[test]
    fn absolute_values() {
        let h = SimpleFunction::real([(int(-3), set("{[0,1]}"))]).unwrap();
        assert_eq!(
            h.abs().to_simple().unwrap(),
            SimpleFunction::real([(int(3), set("{[0,1]}"))]).unwrap()
        );
        let v = SimpleFunction::constant_on(QVector::from_ints(&[3, 4]), set("{[0,1]}"));
        assert_eq!(
            v.abs().to_simple().unwrap(),
            SimpleFunction::real([(int(5), set("{[0,1]}"))]).unwrap()
        );
        assert!(SimpleFunction::zero(2).abs().terms.is_empty());
        let irr = SimpleFunction::constant_on(QVector::from_ints(&[1, 1]), set("{[0,1]}"));
        assert!(irr.abs().to_simple().is_none());
    }

    #[test]
    fn lattice_operations() {
        let a = SimpleFunction::indicator(set("{[0,2]}"));
        let b = SimpleFunction::real([(int(2), set("{[1,3]}"))]).unwrap();
        let expected =
            SimpleFunction::real([(int(1), set("{[0,1)}")), (int(2), set("{[1,3]}"))]).unwrap();
        assert_eq!(a.sup_pointwise(&b).unwrap(), expected.canonical());
        assert_eq!(a.sup_pointwise(&a).unwrap(), a.canonical());
        assert_eq!(
            a.inf_pointwise(&SimpleFunction::zero(1)).unwrap(),
            SimpleFunction::zero(1)
        );
    }

    #[test]
    fn elementary_integrals() {
        let h = h_example();
        assert_eq!(
            h.integral_dv(&Measure::Riemann).unwrap(),
            QVector::from_ints(&[12])
        );
        for x0 in [frac(1, 2), int(1), int(3), int(-1)] {
            assert_eq!(
                h.integral_dv(&Measure::Dirac(x0.clone())).unwrap(),
                h.eval(&x0)
            );
        }
        assert!(SimpleFunction::zero(3)
            .integral_dv(&Measure::Riemann)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn bilinear_integrals() {
        let riemann_mu = VectorMeasure::riemann("[-10,10]".parse().unwrap()).unwrap();
        let h = h_example();
        assert_eq!(
            h.integral_u_dmu(&BilinearOp::scalar(), &riemann_mu)
                .unwrap(),
            h.integral_dv(&Measure::Riemann).unwrap()
        );
        let f = PiecewiseFunc::polynomial(
            "[-5,5]".parse().unwrap(),
            vec![Poly::x(), Poly::from_ints(&[0, 2])],
        )
        .unwrap();
        let mu = VectorMeasure::increment_of(f, int(3));
        let one = SimpleFunction::indicator(set("{[0,1]}"));
        assert_eq!(
            one.integral_u_dmu(&BilinearOp::scalar_times_vector(2), &mu)
                .unwrap(),
            QVector::from_ints(&[1, 2])
        );
        assert!(SimpleFunction::zero(1)
            .integral_u_dmu(&BilinearOp::scalar_times_vector(2), &mu)
            .unwrap()
            .is_zero());
        assert!(h.integral_u_dmu(&BilinearOp::scalar(), &mu).is_err());
    }

    #[test]
    fn seminorms() {
        let h = SimpleFunction::real([(int(-3), set("{[0,2]}"))]).unwrap();
        assert_eq!(
            h.seminorm(&Measure::Riemann).unwrap().as_rational(),
            Some(int(6))
        );
        let v = SimpleFunction::constant_on(QVector::from_ints(&[3, 4]), set("{[0,1]}"));
        assert_eq!(
            v.seminorm(&Measure::Riemann).unwrap().as_rational(),
            Some(int(5))
        );
        assert!(SimpleFunction::zero(2)
            .seminorm(&Measure::Riemann)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn representation_invariance() {
        let mu = VectorMeasure::riemann("[-10,10]".parse().unwrap()).unwrap();
        let u = BilinearOp::scalar();
        let r1 = SimpleFunction::real([(int(2), set("{[0,2]}"))]).unwrap();
        let r2 =
            SimpleFunction::real([(int(2), set("{[0,1)}")), (int(2), set("{[1,2]}"))]).unwrap();
        assert!(
            check_representation_invariance(&r1, &r2, &Measure::Riemann, &mu, &u)
                .unwrap()
                .passed()
        );
        let r3 = SimpleFunction::real([(int(3), set("{[0,2]}"))]).unwrap();
        assert!(matches!(
            check_representation_invariance(&r1, &r3, &Measure::Riemann, &mu, &u),
            Err(Error::NotSameFunction(_))
        ));
    }

    #[test]
    fn step_approximation() {
        let id = PiecewiseFunc::polynomial("[0,1]".parse().unwrap(), vec![Poly::x()]).unwrap();
        let a = approximate_continuous(&id, &"[0,1]".parse().unwrap(), 4).unwrap();
        assert_eq!(a.certificate, frac(1, 4));
        assert_eq!(a.function.terms().len(), 4);
        let c = PiecewiseFunc::polynomial("[0,1]".parse().unwrap(), vec![Poly::from_ints(&[7])])
            .unwrap();
        assert_eq!(
            approximate_continuous(&c, &"[0,1]".parse().unwrap(), 3)
                .unwrap()
                .certificate,
            int(0)
        );
        let sq =
            PiecewiseFunc::polynomial("[0,2]".parse().unwrap(), vec![Poly::from_ints(&[0, 0, 1])])
                .unwrap();
        assert_eq!(
            approximate_continuous(&sq, &"[0,2]".parse().unwrap(), 8)
                .unwrap()
                .certificate,
            int(1)
        );
    }

    #[test]
    fn json_round_trip() {
        let h = SimpleFunction::new(
            2,
            [(QVector(vec![frac(1, 2), int(-3)]), set("{[0,1),(2,3]}"))],
        )
        .unwrap();
        let text = serde_json::to_string(&h).unwrap();
        assert_eq!(
            text,
            r#"{"dim":2,"terms":[{"coeff":["1/2","-3"],"carrier":["[0,1)","(2,3]"]}]}"#
        );
        assert_eq!(serde_json::from_str::<SimpleFunction>(&text).unwrap(), h);
        let overlapping = r#"{"dim":1,"terms":[{"coeff":["1"],"carrier":["[0,2]"]},{"coeff":["1"],"carrier":["[1,3]"]}]}"#;
        assert!(serde_json::from_str::<SimpleFunction>(overlapping).is_err());
    }
}
