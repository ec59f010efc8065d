//! Seeded generators for randomized instances.
//!
//! Every batch draws instance `i` from its own ChaCha stream, so a batch
//! gives the same instances whether it runs sequentially or in parallel.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dsl::{Body, Form, FuncSpec, Node, Var};
use crate::expr::Primitive;
use crate::piecewise::PiecewiseFunc;
use crate::poly::Poly;
use crate::prering::{Interval, SimpleSet};
use crate::rational::{self, Rational};
use crate::simple::SimpleFunction;
use crate::tensor::Cube;
use crate::vector::QVector;

/// The rng for instance `index` of a batch seeded with `seed`.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `k / den` with `k` uniform so that the value lies in `[lo, hi]`.
pub fn rand_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rational {
    rational::frac(rng.gen_range(lo * den..=hi * den), den)
}

/// A small signed rational, never with a huge denominator.
pub fn rand_coeff<R: Rng>(rng: &mut R) -> Rational {
    let den = [1, 2, 3, 4, 5, 7][rng.gen_range(0..6)];
    rand_rational(rng, -4, 4, den)
}

/// `n` distinct sorted points of `[lo, hi]` on a grid of step `1/den`.
pub fn rand_cuts<R: Rng>(
    rng: &mut R,
    lo: &Rational,
    hi: &Rational,
    n: usize,
    den: i64,
) -> Vec<Rational> {
    let width = hi - lo;
    let mut ks: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=den)).collect();
    ks.sort_unstable();
    ks.dedup();
    ks.into_iter()
        .map(|k| lo + &width * rational::frac(k, den))
        .collect()
}

/// Two distinct points of `lo + (hi - lo) k / den`, in random order.
pub fn rand_distinct_pair<R: Rng>(
    rng: &mut R,
    lo: &Rational,
    hi: &Rational,
    den: i64,
) -> (Rational, Rational) {
    let a = rng.gen_range(0..=den);
    let b = (a + rng.gen_range(1..=den)) % (den + 1);
    let at = |k| lo + (hi - lo) * rational::frac(k, den);
    (at(a), at(b))
}

/// Strictly increasing knots `lo = k_0 < ... < k_n = hi`.
pub fn rand_knots<R: Rng>(rng: &mut R, lo: &Rational, hi: &Rational, n: usize) -> Vec<Rational> {
    let den = 64 * n.max(1) as i64;
    let width = hi - lo;
    let mut ks: Vec<i64> = (0..n.saturating_sub(1))
        .map(|_| rng.gen_range(1..den))
        .collect();
    ks.push(0);
    ks.push(den);
    ks.sort_unstable();
    ks.dedup();
    ks.into_iter()
        .map(|k| lo + &width * rational::frac(k, den))
        .collect()
}

/// An interval in `[-4, 4]` with random closure; sometimes degenerate.
pub fn rand_interval<R: Rng>(rng: &mut R) -> Interval {
    let den = [1, 2, 3, 8][rng.gen_range(0..4)];
    let a = rand_rational(rng, -4, 4, den);
    let b = if rng.gen_bool(0.1) {
        a.clone()
    } else {
        rand_rational(rng, -4, 4, den)
    };
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    Interval::new(lo, hi, rng.gen(), rng.gen()).expect("ordered endpoints")
}

/// A union of up to `max_parts` random intervals inside `[lo, hi]`.
pub fn rand_simple_set<R: Rng>(
    rng: &mut R,
    lo: &Rational,
    hi: &Rational,
    max_parts: usize,
) -> SimpleSet {
    let n = rng.gen_range(1..=max_parts.max(1));
    let parts: Vec<Interval> = (0..n)
        .map(|_| {
            let c = rand_cuts(rng, lo, hi, 2, 48);
            let (a, b) = (c[0].clone(), c.last().unwrap().clone());
            Interval::new(a, b, rng.gen(), rng.gen()).expect("ordered endpoints")
        })
        .collect();
    SimpleSet::normalize(parts)
}

/// A simple function on `[lo, hi]`: random cut points split the range into
/// cells with random closure, and each cell goes to a random term (or to
/// none).
pub fn rand_simple_function<R: Rng>(
    rng: &mut R,
    dim: usize,
    lo: &Rational,
    hi: &Rational,
    max_terms: usize,
) -> SimpleFunction {
    let n_terms = rng.gen_range(1..=max_terms.max(1));
    let cuts = rand_cuts(rng, lo, hi, 2 * n_terms + 2, 60);
    let mut cells = Vec::new();
    for w in cuts.windows(2) {
        // Each open gap and, separately, its right endpoint.
        if w[0] < w[1] {
            cells.push(Interval::open(w[0].clone(), w[1].clone()).expect("ordered"));
        }
        cells.push(Interval::singleton(w[1].clone()));
    }
    cells.push(Interval::singleton(cuts[0].clone()));
    let mut carriers = vec![Vec::new(); n_terms];
    for c in cells {
        let k = rng.gen_range(0..=n_terms);
        if k < n_terms {
            carriers[k].push(c);
        }
    }
    let terms: Vec<(QVector, SimpleSet)> = carriers
        .into_iter()
        .map(|parts| {
            (
                QVector((0..dim).map(|_| rand_coeff(rng)).collect()),
                SimpleSet::normalize(parts),
            )
        })
        .collect();
    SimpleFunction::new(dim, terms).expect("cells are disjoint")
}

/// Same function, different representation: every carrier part is cut at
/// a random interior point and the halves become separate terms.
pub fn resplit<R: Rng>(rng: &mut R, h: &SimpleFunction) -> SimpleFunction {
    let mut terms = Vec::new();
    for t in h.terms() {
        for part in t.carrier.parts() {
            if part.is_singleton() || part.is_empty() || rng.gen_bool(0.3) {
                terms.push((t.coeff.clone(), SimpleSet::from_interval(part.clone())));
                continue;
            }
            let x = part.lo() + (part.hi() - part.lo()) * rational::frac(rng.gen_range(1..16), 16);
            let left = Interval::new(part.lo().clone(), x.clone(), part.lo_closed(), false)
                .expect("ordered");
            let right =
                Interval::new(x, part.hi().clone(), true, part.hi_closed()).expect("ordered");
            terms.push((t.coeff.clone(), SimpleSet::from_interval(left)));
            terms.push((t.coeff.clone(), SimpleSet::from_interval(right)));
        }
    }
    SimpleFunction::new(h.dim(), terms).expect("splitting keeps carriers disjoint")
}

pub fn rand_poly<R: Rng>(rng: &mut R, max_degree: usize) -> Poly {
    let deg = rng.gen_range(0..=max_degree);
    Poly::new((0..=deg).map(|_| rand_coeff(rng)).collect())
}

/// A continuous piecewise polynomial on `[lo, hi]` with `n_pieces` pieces:
/// each piece's constant term is shifted so it meets its left neighbour.
pub fn rand_continuous_piecewise_poly<R: Rng>(
    rng: &mut R,
    dim: usize,
    lo: &Rational,
    hi: &Rational,
    n_pieces: usize,
    max_degree: usize,
) -> PiecewiseFunc {
    let knots = rand_knots(rng, lo, hi, n_pieces);
    let mut pieces: Vec<Vec<Poly>> = Vec::with_capacity(knots.len() - 1);
    for knot in &knots[..knots.len() - 1] {
        let coords = (0..dim)
            .map(|k| {
                let p = rand_poly(rng, max_degree);
                match pieces.last() {
                    Some(prev) => {
                        let jump = prev[k].eval(knot) - p.eval(knot);
                        p.add(&Poly::constant(jump))
                    }
                    None => p,
                }
            })
            .collect();
        pieces.push(coords);
    }
    PiecewiseFunc::from_poly_knots(&knots, pieces).expect("valid knots")
}

/// A continuous piecewise-linear curve in R^2 on `[lo, hi]`.
pub fn rand_pl_r2<R: Rng>(
    rng: &mut R,
    lo: &Rational,
    hi: &Rational,
    n_pieces: usize,
) -> PiecewiseFunc {
    rand_continuous_piecewise_poly(rng, 2, lo, hi, n_pieces, 1)
}

/// A half-open cube `(a_1, b_1] x ... ` with nonempty factors in `[-3, 3]`.
pub fn rand_cube<R: Rng>(rng: &mut R, dim: usize) -> Cube {
    let bounds: Vec<(Rational, Rational)> = (0..dim)
        .map(|_| {
            let a = rand_rational(rng, -3, 2, 4);
            let len = rational::frac(rng.gen_range(1..=12), 4);
            (a.clone(), a + len)
        })
        .collect();
    Cube::half_open(&bounds).expect("ordered bounds")
}

/// A random `k_1 x ... x k_d` grid partition of a half-open cube.
pub fn rand_grid_partition<R: Rng>(rng: &mut R, cube: &Cube, max_splits: usize) -> Vec<Cube> {
    let axes: Vec<Vec<Rational>> = cube
        .factors()
        .iter()
        .map(|f| {
            let n = rng.gen_range(1..=max_splits.max(1));
            rand_knots(rng, f.lo(), f.hi(), n)
        })
        .collect();
    let mut cells: Vec<Vec<(Rational, Rational)>> = vec![Vec::new()];
    for knots in &axes {
        let mut next = Vec::with_capacity(cells.len() * knots.len());
        for prefix in &cells {
            for w in knots.windows(2) {
                let mut c = prefix.clone();
                c.push((w[0].clone(), w[1].clone()));
                next.push(c);
            }
        }
        cells = next;
    }
    cells
        .iter()
        .map(|b| Cube::half_open(b).expect("ordered bounds"))
        .collect()
}

fn rand_node<R: Rng>(rng: &mut R, var: Var, depth: u32) -> Node {
    let b = |n: Node| Box::new(n);
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..3) {
            0 => Node::Num(rand_coeff(rng)),
            1 => Node::Poly((0..rng.gen_range(1..4)).map(|_| rand_coeff(rng)).collect()),
            _ => Node::Var(var),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..7) {
        0 => Node::Neg(b(rand_node(rng, var, d))),
        1 => Node::Add(b(rand_node(rng, var, d)), b(rand_node(rng, var, d))),
        2 => Node::Sub(b(rand_node(rng, var, d)), b(rand_node(rng, var, d))),
        3 => Node::Mul(b(rand_node(rng, var, d)), b(rand_node(rng, var, d))),
        4 => Node::Pow(b(rand_node(rng, var, d)), rng.gen_range(0..4)),
        _ => {
            let p = [
                Primitive::Sin,
                Primitive::Cos,
                Primitive::Exp,
                Primitive::Abs,
            ][rng.gen_range(0..4)];
            Node::Call(p, b(rand_node(rng, var, d)))
        }
    }
}

/// A well-formed spec for parser round trips: one or more contiguous
/// pieces, scalar or tuple bodies, expressions up to depth 4.
pub fn rand_spec<R: Rng>(rng: &mut R) -> FuncSpec {
    let var = if rng.gen() { Var::X } else { Var::T };
    let n = rng.gen_range(1..=4);
    let dim = rng.gen_range(1..=3);
    let tuple = dim > 1 || rng.gen_bool(0.2);
    let (lo, hi) = (rand_rational(rng, -3, 0, 4), rand_rational(rng, 1, 3, 4));
    let knots = rand_knots(rng, &lo, &hi, n);
    let pieces = knots
        .windows(2)
        .enumerate()
        .map(|(i, w)| {
            let last = i + 2 == knots.len();
            let interval =
                Interval::new(w[0].clone(), w[1].clone(), true, last).expect("ordered knots");
            let coords: Vec<Node> = (0..dim).map(|_| rand_node(rng, var, 4)).collect();
            let body = if tuple {
                Body::Tuple(coords)
            } else {
                Body::Scalar(coords.into_iter().next().unwrap())
            };
            (interval, body)
        })
        .collect::<Vec<_>>();
    let form = if pieces.len() == 1 && rng.gen() {
        Form::On
    } else {
        Form::Piecewise
    };
    FuncSpec { form, pieces }
}
