//! Cubes in Q^n as the product prering of intervals, with the product
//! valuation.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::Measure;
use crate::prering::{self, Interval, SimpleSet};
use crate::rational::Rational;
use crate::report::Report;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Cube {
    factors: Vec<Interval>,
}

impl Cube {
    pub fn new(factors: Vec<Interval>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidArgument(
                "a cube needs at least one factor".into(),
            ));
        }
        Ok(Cube { factors })
    }

    /// `(lo_1, hi_1] x ... x (lo_n, hi_n]`.
    pub fn half_open(bounds: &[(Rational, Rational)]) -> Result<Self> {
        Self::new(
            bounds
                .iter()
                .map(|(a, b)| Interval::open_closed(a.clone(), b.clone()))
                .collect::<Result<_>>()?,
        )
    }

    pub fn dim(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[Interval] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.iter().any(Interval::is_empty)
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        p.len() == self.dim() && self.factors.iter().zip(p).all(|(i, x)| i.contains(x))
    }

    pub fn is_subset(&self, other: &Cube) -> bool {
        self.is_empty()
            || (self.dim() == other.dim()
                && self
                    .factors
                    .iter()
                    .zip(&other.factors)
                    .all(|(a, b)| a.is_subset(b)))
    }

    fn check_dim(&self, other: &Cube) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, i) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str("x")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl FromStr for Cube {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Cube::new(
            s.split('x')
                .map(|p| p.trim().parse::<Interval>())
                .collect::<Result<_>>()?,
        )
    }
}

impl From<Cube> for String {
    fn from(c: Cube) -> String {
        c.to_string()
    }
}

impl TryFrom<String> for Cube {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

/// Finite union of pairwise disjoint cubes.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CubeSimpleSet {
    cells: Vec<Cube>,
}

impl CubeSimpleSet {
    pub fn new(cells: Vec<Cube>) -> Result<Self> {
        let cells: Vec<Cube> = cells.into_iter().filter(|c| !c.is_empty()).collect();
        for (i, a) in cells.iter().enumerate() {
            for b in &cells[i + 1..] {
                if !cube_intersect(a, b)?.is_empty() {
                    return Err(Error::OverlappingCarriers);
                }
            }
        }
        Ok(CubeSimpleSet { cells })
    }

    pub fn cells(&self) -> &[Cube] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.cells.iter().any(|c| c.contains(p))
    }

    pub fn measure(&self, factor_measures: &[Measure]) -> Result<Rational> {
        let mut acc = Rational::zero();
        for c in &self.cells {
            acc += cube_measure(c, factor_measures)?;
        }
        Ok(acc)
    }
}

/// `v_1(A_1) ... v_n(A_n)`.
pub fn cube_measure(c: &Cube, factor_measures: &[Measure]) -> Result<Rational> {
    if factor_measures.len() != c.dim() {
        return Err(Error::DimMismatch {
            expected: c.dim(),
            found: factor_measures.len(),
        });
    }
    if c.is_empty() {
        return Ok(Rational::zero());
    }
    let mut acc = Rational::one();
    for (i, v) in c.factors.iter().zip(factor_measures) {
        acc *= v.eval_interval(i)?;
    }
    Ok(acc)
}

pub fn cube_intersect(c1: &Cube, c2: &Cube) -> Result<Cube> {
    c1.check_dim(c2)?;
    Ok(Cube {
        factors: c1
            .factors
            .iter()
            .zip(&c2.factors)
            .map(|(a, b)| a.intersect(b))
            .collect(),
    })
}

/// A product cell of a common refinement, with the indices of the input
/// cubes containing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubeCell {
    pub cube: Cube,
    pub members: Vec<usize>,
}

/// Common refinement of any number of cubes: products of the per-axis
/// refinements, restricted to cells covered by at least one input.
pub fn refine_cubes(cubes: &[Cube]) -> Result<Vec<CubeCell>> {
    let Some(first) = cubes.first() else {
        return Ok(Vec::new());
    };
    for c in cubes {
        first.check_dim(c)?;
    }
    let live: Vec<usize> = (0..cubes.len()).filter(|&j| !cubes[j].is_empty()).collect();
    let axes: Vec<Vec<prering::RefinedCell>> = (0..first.dim())
        .map(|k| {
            let sets: Vec<SimpleSet> = live
                .iter()
                .map(|&j| SimpleSet::from_interval(cubes[j].factors[k].clone()))
                .collect();
            prering::refine_with_membership(&sets)
        })
        .collect();

    let mut out = Vec::new();
    let mut idx = vec![0usize; axes.len()];
    if axes.iter().any(Vec::is_empty) {
        return Ok(out);
    }
    loop {
        // Intersect the member lists along every axis.
        let mut members: Vec<usize> = axes[0][idx[0]].members.clone();
        for k in 1..axes.len() {
            let m = &axes[k][idx[k]].members;
            members.retain(|j| m.binary_search(j).is_ok());
            if members.is_empty() {
                break;
            }
        }
        if !members.is_empty() {
            out.push(CubeCell {
                cube: Cube {
                    factors: (0..axes.len())
                        .map(|k| axes[k][idx[k]].cell.clone())
                        .collect(),
                },
                members: members.into_iter().map(|m| live[m]).collect(),
            });
        }
        let mut k = axes.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Greedily joins cells with equal membership that differ in one adjacent
/// factor, so that simple configurations come back in their obvious form.
fn coalesce(mut cells: Vec<CubeCell>) -> Vec<CubeCell> {
    let mut changed = true;
    while changed {
        changed = false;
        'scan: for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                if cells[i].members != cells[j].members {
                    continue;
                }
                if let Some(joined) = join_cubes(&cells[i].cube, &cells[j].cube) {
                    cells[i].cube = joined;
                    cells.swap_remove(j);
                    changed = true;
                    break 'scan;
                }
            }
        }
    }
    cells.sort_by(|a, b| a.cube.cmp(&b.cube));
    cells
}

fn join_cubes(a: &Cube, b: &Cube) -> Option<Cube> {
    let mut differing = None;
    for (k, (x, y)) in a.factors.iter().zip(&b.factors).enumerate() {
        if x != y {
            if differing.is_some() {
                return None;
            }
            differing = Some(k);
        }
    }
    let k = differing?;
    let u = SimpleSet::from_interval(a.factors[k].clone())
        .union(&SimpleSet::from_interval(b.factors[k].clone()));
    match u.parts() {
        [single] => {
            let mut factors = a.factors.clone();
            factors[k] = single.clone();
            Some(Cube { factors })
        }
        _ => None,
    }
}

/// Disjoint cells reconstructing both `a` and `b` as unions of subsets.
pub fn cube_refine(a: &Cube, b: &Cube) -> Result<CubeSimpleSet> {
    let cells = coalesce(refine_cubes(&[a.clone(), b.clone()])?);
    Ok(CubeSimpleSet {
        cells: cells.into_iter().map(|c| c.cube).collect(),
    })
}

/// `a \ b` as a finite disjoint union of cubes.
pub fn cube_diff(a: &Cube, b: &Cube) -> Result<CubeSimpleSet> {
    let cells = refine_cubes(&[a.clone(), b.clone()])?
        .into_iter()
        .filter(|c| c.members == [0])
        .collect();
    Ok(CubeSimpleSet {
        cells: coalesce(cells).into_iter().map(|c| c.cube).collect(),
    })
}

/// Verifies that `cells` partition `target`, then compares measures exactly.
pub fn check_tensor_additivity(
    target: &Cube,
    cells: &[Cube],
    factor_measures: &[Measure],
) -> Result<Report> {
    let start = Instant::now();
    let mut all = Vec::with_capacity(cells.len() + 1);
    all.push(target.clone());
    all.extend(cells.iter().cloned());
    for cell in refine_cubes(&all)? {
        let in_target = cell.members.first() == Some(&0);
        let pieces = cell.members.len() - usize::from(in_target);
        if in_target && pieces != 1 {
            return Err(Error::NotAPartition(format!(
                "{} covered {} times",
                cell.cube, pieces
            )));
        }
        if !in_target {
            return Err(Error::NotAPartition(format!(
                "{} lies outside the target",
                cell.cube
            )));
        }
    }
    let whole = cube_measure(target, factor_measures)?;
    let mut sum = Rational::zero();
    for c in cells {
        sum += cube_measure(c, factor_measures)?;
    }
    let pass = sum == whole;
    let report = Report::new(
        "tensor_additivity",
        format!("{} cells of {}", cells.len(), target),
    )
    .conclude_exact(&sum, &whole, pass);
    Ok(Report::timed(start, report))
}

/// A product valuation built from base measures, possibly nested, as in
/// `(v1 ⊗ v2) ⊗ v3`.
#[derive(Debug, Clone, PartialEq)]
pub enum TensorMeasure {
    Base(Measure),
    Product(Vec<TensorMeasure>),
}

impl TensorMeasure {
    pub fn flat(ms: Vec<Measure>) -> Self {
        TensorMeasure::Product(ms.into_iter().map(TensorMeasure::Base).collect())
    }

    /// Number of real coordinates consumed.
    pub fn arity(&self) -> usize {
        match self {
            TensorMeasure::Base(_) => 1,
            TensorMeasure::Product(fs) => fs.iter().map(TensorMeasure::arity).sum(),
        }
    }

    pub fn eval(&self, c: &Cube) -> Result<Rational> {
        if c.dim() != self.arity() {
            return Err(Error::DimMismatch {
                expected: self.arity(),
                found: c.dim(),
            });
        }
        self.eval_factors(c.factors())
    }

    fn eval_factors(&self, fs: &[Interval]) -> Result<Rational> {
        match self {
            TensorMeasure::Base(m) => m.eval_interval(&fs[0]),
            TensorMeasure::Product(parts) => {
                let mut acc = Rational::one();
                let mut at = 0;
                for p in parts {
                    let n = p.arity();
                    acc *= p.eval_factors(&fs[at..at + n])?;
                    at += n;
                }
                Ok(acc)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::PiecewiseFunc;
    use crate::poly::Poly;
    use crate::rational::{frac, int};

    fn cube(s: &str) -> Cube {
        s.parse().unwrap()
    }

    fn x_squared() -> Measure {
        let g =
            PiecewiseFunc::polynomial("[0,10]".parse().unwrap(), vec![Poly::from_ints(&[0, 0, 1])])
                .unwrap();
        Measure::stieltjes(g, []).unwrap()
    }

    #[test]
    fn measures_of_cubes() {
        let r2 = [Measure::Riemann, Measure::Riemann];
        assert_eq!(cube_measure(&cube("(0,2]x(0,3]"), &r2).unwrap(), int(6));
        assert_eq!(cube_measure(&cube("(0,2]x(1,1]"), &r2).unwrap(), int(0));
        assert_eq!(
            cube_measure(&cube("(0,1]x(0,1]"), &[Measure::Riemann, x_squared()]).unwrap(),
            int(1)
        );
        assert!(cube_measure(&cube("(0,1]"), &r2).is_err());
    }

    #[test]
    fn intersections() {
        assert_eq!(
            cube_intersect(&cube("[0,2]x[0,2]"), &cube("[1,3]x[1,3]")).unwrap(),
            cube("[1,2]x[1,2]")
        );
        assert!(cube_intersect(&cube("[0,1]x[0,2]"), &cube("[2,3]x[0,2]"))
            .unwrap()
            .is_empty());
        let c = cube("(0,1]x[2,5)");
        assert_eq!(cube_intersect(&c, &c).unwrap(), c);
        assert!(matches!(
            cube_intersect(&c, &cube("[0,1]")),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn refinements() {
        let r = cube_refine(&cube("[0,2]x[0,1]"), &cube("[1,3]x[0,1]")).unwrap();
        assert_eq!(
            r.cells(),
            &[
                cube("[0,1)x[0,1]"),
                cube("[1,2]x[0,1]"),
                cube("(2,3]x[0,1]")
            ]
        );
        let a = cube("(0,1]x(0,1]");
        assert_eq!(
            cube_refine(&a, &a).unwrap().cells(),
            std::slice::from_ref(&a)
        );
        let b = cube("[2,3]x[1,3]");
        assert_eq!(cube_refine(&a, &b).unwrap().cells(), &[a.clone(), b]);
        let d = cube_diff(&cube("[0,2]x[0,2]"), &cube("[1,3]x[1,3]")).unwrap();
        let r2 = [Measure::Riemann, Measure::Riemann];
        assert_eq!(d.measure(&r2).unwrap(), int(3));
        assert!(!d.contains(&[frac(3, 2), frac(3, 2)]));
        assert!(d.contains(&[frac(1, 2), frac(3, 2)]));
    }

    #[test]
    fn additivity() {
        let r2 = [Measure::Riemann, Measure::Riemann];
        let h = frac(1, 2);
        let quads: Vec<Cube> = [(0, 0), (1, 0), (0, 1), (1, 1)]
            .iter()
            .map(|&(i, j)| {
                let (i, j) = (int(i) * &h, int(j) * &h);
                Cube::half_open(&[(i.clone(), &i + &h), (j.clone(), &j + &h)]).unwrap()
            })
            .collect();
        let unit = cube("(0,1]x(0,1]");
        let rep = check_tensor_additivity(&unit, &quads, &r2).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.conclusion.lhs_exact.as_deref(), Some("1"));
        assert!(
            check_tensor_additivity(&unit, std::slice::from_ref(&unit), &r2)
                .unwrap()
                .passed()
        );
        assert!(matches!(
            check_tensor_additivity(&unit, &quads[..3], &r2),
            Err(Error::NotAPartition(_))
        ));
        let mut doubled = quads.clone();
        doubled.push(quads[0].clone());
        assert!(check_tensor_additivity(&unit, &doubled, &r2).is_err());
    }

    #[test]
    fn associativity() {
        let c = cube("(0,2]x(1,3]x(-1,4]");
        let nested = TensorMeasure::Product(vec![
            TensorMeasure::flat(vec![Measure::Riemann, x_squared()]),
            TensorMeasure::Base(Measure::Riemann),
        ]);
        let flat = TensorMeasure::flat(vec![Measure::Riemann, x_squared(), Measure::Riemann]);
        assert_eq!(nested.eval(&c).unwrap(), flat.eval(&c).unwrap());
        assert_eq!(flat.eval(&c).unwrap(), int(2 * 8 * 5));
    }

    #[test]
    fn text_form() {
        let c = cube("(0,1/2]x[1,2)");
        assert_eq!(c.to_string(), "(0,1/2]x[1,2)");
        assert_eq!(serde_json::to_string(&c).unwrap(), "\"(0,1/2]x[1,2)\"");
        assert!("(0,1]x".parse::<Cube>().is_err());
    }
}
