//! Null-set covers, finite levels of the Cantor set, and the Riesz
//! construction of a continuous nondecreasing function whose derivative
//! blows up on a prescribed null set.

use std::fmt;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::piecewise::PiecewiseFunc;
use crate::poly::Poly;
use crate::prering::{Interval, SimpleSet};
use crate::rational::{self, Rational};
use crate::report::{PremiseSample, Report};

/// Deepest Cantor level built unless the caller raises the cap.
pub const DEFAULT_DEPTH_CAP: u32 = 20;

type IntervalGen = Arc<dyn Fn(usize) -> Interval + Send + Sync>;
type TailFn = Arc<dyn Fn(usize) -> Rational + Send + Sync>;

/// A countable family `I_1, I_2, ...` given by a pure generator, with a
/// declared bound on the total length and on every tail sum.
#[derive(Clone)]
pub struct Cover {
    generator: IntervalGen,
    len: Option<usize>,
    declared_total: Rational,
    tail: TailFn,
}

impl fmt::Debug for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Cover")
            .field("len", &self.len)
            .field("declared_total", &self.declared_total)
            .finish_non_exhaustive()
    }
}

impl Cover {
    /// Infinite cover from a generator; `tail(n)` must bound `sum_{k>n} |I_k|`.
    pub fn generated(
        generator: impl Fn(usize) -> Interval + Send + Sync + 'static,
        declared_total: Rational,
        tail: impl Fn(usize) -> Rational + Send + Sync + 'static,
    ) -> Self {
        Cover {
            generator: Arc::new(generator),
            len: None,
            declared_total,
            tail: Arc::new(tail),
        }
    }

    /// Finite cover, padded with empty intervals past its end.
    pub fn finite(intervals: Vec<Interval>) -> Self {
        Self::finite_with_tail(intervals, Rational::zero())
    }

    /// Finite listing followed by unlisted intervals of total length at
    /// most `rest`.
    fn finite_with_tail(intervals: Vec<Interval>, rest: Rational) -> Self {
        let mut suffix = vec![rest.clone(); intervals.len() + 1];
        for k in (0..intervals.len()).rev() {
            suffix[k] = &suffix[k + 1] + intervals[k].length();
        }
        let total = suffix[0].clone();
        let len = intervals.len();
        let items = Arc::new(intervals);
        let suffix = Arc::new(suffix);
        Cover {
            generator: Arc::new(move |n| {
                n.checked_sub(1)
                    .and_then(|k| items.get(k).cloned())
                    .unwrap_or_else(Interval::empty)
            }),
            len: Some(len),
            declared_total: total,
            tail: Arc::new(move |n| suffix[n.min(len)].clone()),
        }
    }

    pub fn empty() -> Self {
        Self::finite(Vec::new())
    }

    /// `I_n` for `n >= 1`; empty past the end of a finite cover.
    pub fn interval(&self, n: usize) -> Interval {
        if n == 0 {
            return Interval::empty();
        }
        (self.generator)(n)
    }

    pub fn first(&self, n: usize) -> Vec<Interval> {
        (1..=n).map(|k| self.interval(k)).collect()
    }

    /// Number of listed intervals, if finite.
    pub fn len(&self) -> Option<usize> {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == Some(0)
    }

    pub fn declared_total(&self) -> &Rational {
        &self.declared_total
    }

    pub fn tail_bound(&self, n: usize) -> Rational {
        (self.tail)(n)
    }

    /// Checks `sum_{k<=n} |I_k| <= declared_total` at every prefix up to
    /// `n`, returning the full partial sum.
    pub fn check_prefix(&self, n: usize) -> Result<Rational> {
        let mut acc = Rational::zero();
        for k in 1..=n {
            acc += self.interval(k).length();
            if acc > self.declared_total {
                return Err(Error::InvalidArgument(format!(
                    "partial sum {} exceeds declared total {}",
                    acc, self.declared_total
                )));
            }
        }
        Ok(acc)
    }

    /// Parses a cover file: one interval per line, `#` comments, and an
    /// optional `# tail c r` line declaring that the unlisted remainder has
    /// total length at most `c r^N`, where `N` is the number of listed
    /// intervals.
    pub fn parse(text: &str) -> Result<Self> {
        let mut intervals = Vec::new();
        let mut tail: Option<(Rational, Rational)> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('#') {
                let words: Vec<&str> = comment.split_whitespace().collect();
                if let ["tail", c, r] = words[..] {
                    let (c, r) = (rational::parse(c)?, rational::parse(r)?);
                    if c.is_negative() || r.is_negative() || r >= Rational::one() {
                        return Err(Error::InvalidArgument(format!(
                            "line {}: tail needs c >= 0 and 0 <= r < 1",
                            lineno + 1
                        )));
                    }
                    tail = Some((c, r));
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            intervals.push(
                line.parse::<Interval>()
                    .map_err(|e| Error::InvalidArgument(format!("line {}: {}", lineno + 1, e)))?,
            );
        }
        let rest = match tail {
            Some((c, r)) => c * num_traits::pow(r, intervals.len()),
            None => Rational::zero(),
        };
        Ok(Self::finite_with_tail(intervals, rest))
    }
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.len {
            Some(n) => write!(
                f,
                "cover of {n} intervals, total <= {}",
                self.declared_total
            ),
            None => write!(f, "infinite cover, total <= {}", self.declared_total),
        }
    }
}

/// Level `F_n` of the Cantor construction: `2^n` closed intervals
/// `[a/3^n, (a+1)/3^n]`, stored by their integer numerators `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorLevel {
    n: u32,
    numerators: Vec<u64>,
}

impl CantorLevel {
    pub fn depth(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    fn denominator(&self) -> u64 {
        3u64.pow(self.n)
    }

    pub fn intervals(&self) -> impl Iterator<Item = Interval> + '_ {
        let den = BigInt::from(self.denominator());
        self.numerators.iter().map(move |&a| {
            Interval::closed(
                Rational::new(BigInt::from(a), den.clone()),
                Rational::new(BigInt::from(a + 1), den.clone()),
            )
            .expect("ordered endpoints")
        })
    }

    pub fn set(&self) -> SimpleSet {
        SimpleSet::from_canonical_parts(self.intervals().collect())
    }

    /// Exact total length, summed over the parts in integer arithmetic.
    pub fn length(&self) -> Rational {
        let num: u64 = self.numerators.iter().map(|&a| (a + 1) - a).sum();
        Rational::new(BigInt::from(num), BigInt::from(self.denominator()))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let scaled = x * Rational::from_integer(BigInt::from(self.denominator()));
        let idx = self
            .numerators
            .partition_point(|&a| Rational::from_integer(BigInt::from(a + 1)) < scaled);
        self.numerators
            .get(idx)
            .is_some_and(|&a| Rational::from_integer(BigInt::from(a)) <= scaled)
    }
}

pub fn cantor_level(n: u32) -> Result<CantorLevel> {
    cantor_level_capped(n, DEFAULT_DEPTH_CAP)
}

pub fn cantor_level_capped(n: u32, cap: u32) -> Result<CantorLevel> {
    // 3^40 still fits in u64.
    if n > cap || n > 40 {
        return Err(Error::DepthCap {
            requested: n,
            cap: cap.min(40),
        });
    }
    let mut numerators = vec![0u64];
    for _ in 0..n {
        numerators = numerators
            .iter()
            .flat_map(|&a| [3 * a, 3 * a + 2])
            .collect();
    }
    Ok(CantorLevel { n, numerators })
}

/// Membership of `x` in `F_depth`, by ternary digits. A digit 1 followed by
/// nothing but zeros is read as the endpoint it is.
pub fn cantor_contains(x: &Rational, depth: u32) -> bool {
    let (zero, one, two) = (Rational::zero(), Rational::one(), rational::int(2));
    if *x < zero || *x > one {
        return false;
    }
    let three = rational::int(3);
    let mut y = x.clone();
    for _ in 0..depth {
        y = &y * &three;
        if y <= one {
            continue;
        }
        if y >= two {
            y -= &two;
            continue;
        }
        return false;
    }
    true
}

/// Opens up every interval so that the padded family still has total length
/// at most `sum |I_k| + eps`.
pub fn inflate_cover(raw: &[Interval], eps: &Rational) -> Result<Cover> {
    if !eps.is_positive() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    Ok(Cover::finite(inflate(raw, eps)))
}

// A finite list of m intervals gets the uniform pad eps/(2m) per side. The
// geometric pad 2^{-k-2} eps spends the same budget but blows up the
// denominators to 2^m.
fn inflate(raw: &[Interval], eps: &Rational) -> Vec<Interval> {
    let kept: Vec<&Interval> = raw.iter().filter(|i| !i.is_empty()).collect();
    let pad = eps / rational::int(2 * kept.len().max(1) as i64);
    kept.into_iter()
        .map(|i| Interval::open(i.lo() - &pad, i.hi() + &pad).expect("padded interval"))
        .collect()
}

/// Concatenates levels `1..=levels`, checking each against its budget
/// `2^{-n}`. Unmaterialized levels are accounted for in the tail bound.
pub fn normalize_cover<F>(per_level: F, levels: usize) -> Result<Cover>
where
    F: Fn(usize) -> Vec<Interval>,
{
    let mut all = Vec::new();
    for n in 1..=levels {
        let items = per_level(n);
        let total: Rational = items.iter().map(Interval::length).sum();
        let budget = rational::pow2(-(n as i32));
        if total > budget {
            return Err(Error::LevelBudgetExceeded {
                level: n,
                total: Box::new(total),
                budget: Box::new(budget),
            });
        }
        all.extend(items.into_iter().filter(|i| !i.is_empty()));
    }
    Ok(Cover::finite_with_tail(
        all,
        rational::pow2(-(levels as i32)),
    ))
}

/// Smallest depth `d` with `(2/3)^d <= 2^{-n-1}`.
pub fn cantor_depth_for_level(n: usize) -> u32 {
    let target = rational::pow2(-(n as i32) - 1);
    let ratio = rational::frac(2, 3);
    let mut d = 0;
    let mut len = Rational::one();
    while len > target {
        len *= &ratio;
        d += 1;
    }
    d
}

/// Level `n` of the standard null cover of the Cantor set: `F_{d(n)}`
/// inflated with `eps = 2^{-n-1}`, so the level total is at most `2^{-n}`.
pub fn cantor_null_level(n: usize) -> Result<Vec<Interval>> {
    let level = cantor_level_capped(cantor_depth_for_level(n), 40)?;
    let raw: Vec<Interval> = level.intervals().collect();
    Ok(inflate(&raw, &rational::pow2(-(n as i32) - 1)))
}

/// The normalized Cantor cover with `levels` materialized levels; every
/// level covers the whole Cantor set.
pub fn cantor_null_cover(levels: usize) -> Result<Cover> {
    let mut cache = Vec::with_capacity(levels);
    for n in 1..=levels {
        cache.push(cantor_null_level(n)?);
    }
    normalize_cover(|n| cache[n - 1].clone(), levels)
}

/// `G_I(x)`: 0 below `I`, `x - a` inside, `|I|` above.
pub fn g_interval(i: &Interval, x: &Rational) -> Rational {
    if i.is_empty() || x <= i.lo() {
        return Rational::zero();
    }
    if x >= i.hi() {
        return i.length();
    }
    x - i.lo()
}

/// Partial sum `sum_{n <= n_terms} G_{I_n}(x)` and the bound on the
/// neglected remainder.
pub fn riesz_g(cover: &Cover, x: &Rational, n_terms: usize) -> (Rational, Rational) {
    let value = (1..=n_terms)
        .map(|n| g_interval(&cover.interval(n), x))
        .sum();
    (value, cover.tail_bound(n_terms))
}

/// `psi(x) = g(x) + G_I(x) + 1` on the domain `I`.
pub fn psi(
    cover: &Cover,
    domain: &Interval,
    x: &Rational,
    n_terms: usize,
) -> Result<(Rational, Rational)> {
    if !domain.contains(x) {
        return Err(Error::OutOfDomain(x.clone()));
    }
    let (g, err) = riesz_g(cover, x, n_terms);
    Ok((g + g_interval(domain, x) + Rational::one(), err))
}

/// The partial sum over the first `n_terms` intervals as an exact
/// piecewise-linear function on `domain`.
pub fn riesz_partial(cover: &Cover, domain: &Interval, n_terms: usize) -> Result<PiecewiseFunc> {
    let (lo, hi) = (domain.lo().clone(), domain.hi().clone());
    let intervals: Vec<Interval> = cover
        .first(n_terms)
        .into_iter()
        .filter(|i| !i.is_empty())
        .collect();
    // Slope changes +1 at each left end and -1 at each right end.
    let mut events: Vec<(Rational, i64)> = Vec::with_capacity(2 * intervals.len());
    for i in &intervals {
        events.push((i.lo().clone(), 1));
        events.push((i.hi().clone(), -1));
    }
    events.sort();
    let mut knots = vec![lo.clone()];
    knots.extend(
        events
            .iter()
            .map(|(x, _)| x.clone())
            .filter(|x| *x > lo && *x < hi),
    );
    knots.push(hi.clone());
    knots.dedup();

    let mut slope: i64 = events
        .iter()
        .filter(|(x, _)| *x <= lo)
        .map(|(_, d)| d)
        .sum();
    let (mut value, _) = riesz_g(&Cover::finite(intervals), &lo, n_terms);
    let mut next_event = events.partition_point(|(x, _)| *x <= lo);
    let mut pieces = Vec::with_capacity(knots.len());
    for w in knots.windows(2) {
        let s = rational::int(slope);
        pieces.push(vec![Poly::new(vec![&value - &s * &w[0], s.clone()])]);
        value += &s * (&w[1] - &w[0]);
        while next_event < events.len() && events[next_event].0 <= w[1] {
            slope += events[next_event].1;
            next_event += 1;
        }
    }
    if pieces.is_empty() {
        return PiecewiseFunc::polynomial(domain.clone(), vec![Poly::constant(value)]);
    }
    PiecewiseFunc::from_poly_knots(&knots, pieces)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowupWitness {
    /// Number of the first `n` intervals whose interior contains `t`.
    pub k: usize,
    /// `(t - delta, t + delta)` lies inside each of them.
    pub delta: Rational,
    pub n: usize,
}

pub fn blowup_witness(cover: &Cover, t: &Rational, n: usize) -> Result<BlowupWitness> {
    let mut k = 0;
    let mut delta: Option<Rational> = None;
    for i in cover.first(n) {
        let inner = i.interior();
        if inner.contains(t) {
            k += 1;
            let room = rational::min(&(t - i.lo()), &(i.hi() - t));
            delta = Some(match delta {
                Some(d) => rational::min(&d, &room),
                None => room,
            });
        }
    }
    match delta {
        Some(delta) => Ok(BlowupWitness { k, delta, n }),
        None => Err(Error::NotCovered(t.clone(), n)),
    }
}

/// Samples `x` in `(t - delta, t + delta)` and checks that the difference
/// quotients of the partial sum over the first `n` intervals are at least
/// `k`. The neglected tail is nondecreasing, so the full function only
/// steepens and the slack is zero.
pub fn verify_blowup(
    cover: &Cover,
    t: &Rational,
    w: &BlowupWitness,
    samples: usize,
) -> Result<Report> {
    let start = Instant::now();
    let k = rational::int(w.k as i64);
    let (gt, _) = riesz_g(cover, t, w.n);
    let mut out = Vec::with_capacity(2 * samples);
    let mut worst: Option<Rational> = None;
    for j in 1..=samples {
        let h = &w.delta * rational::frac(j as i64, samples as i64 + 1);
        for x in [t + &h, t - &h] {
            let (gx, _) = riesz_g(cover, &x, w.n);
            let q = (gx - &gt) / (&x - t);
            let margin = &q - &k;
            out.push(PremiseSample {
                point: rational::to_f64(&x),
                lhs: rational::to_f64(&q),
                rhs: rational::to_f64(&k),
                margin: rational::to_f64(&margin),
            });
            worst = Some(match worst {
                Some(m) => rational::min(&m, &margin),
                None => margin,
            });
        }
    }
    let worst = worst.unwrap_or_else(Rational::zero);
    let min_q = &worst + &k;
    let pass = !worst.is_negative();
    let report = Report::new(
        "riesz_blowup",
        format!(
            "t={} n={} k={} delta={}",
            rational::format(t),
            w.n,
            w.k,
            rational::format(&w.delta)
        ),
    )
    .with_premise(out)
    .conclude_exact(&min_q, &k, pass);
    Ok(Report::timed(start, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn iv(s: &str) -> Interval {
        s.parse().unwrap()
    }

    #[test]
    fn cantor_levels() {
        let f0 = cantor_level(0).unwrap();
        assert_eq!(f0.set(), "{[0,1]}".parse().unwrap());
        assert_eq!(f0.length(), int(1));
        let f1 = cantor_level(1).unwrap();
        assert_eq!(f1.set(), "{[0,1/3],[2/3,1]}".parse().unwrap());
        assert_eq!(f1.length(), frac(2, 3));
        let f2 = cantor_level(2).unwrap();
        assert_eq!(f2.len(), 4);
        assert_eq!(f2.set().length(), frac(4, 9));
        assert!(f2.set().is_subset(&f1.set()));
        assert!(matches!(
            cantor_level(21),
            Err(Error::DepthCap {
                requested: 21,
                cap: 20
            })
        ));
    }

    #[test]
    fn cantor_membership() {
        for depth in 0..=10 {
            let level = cantor_level(depth).unwrap();
            assert!(cantor_contains(&frac(1, 4), depth));
            assert!(level.set().contains(&frac(1, 4)));
            assert!(level.contains(&frac(1, 4)));
            assert!(cantor_contains(&int(0), depth));
        }
        assert!(!cantor_contains(&frac(1, 2), 1));
        for depth in 0..=6 {
            let set = cantor_level(depth).unwrap().set();
            for num in 0..=243 {
                let x = frac(num, 243);
                assert_eq!(
                    cantor_contains(&x, depth),
                    set.contains(&x),
                    "{x} at {depth}"
                );
            }
        }
    }

    #[test]
    fn inflation() {
        let f2: Vec<Interval> = cantor_level(2).unwrap().intervals().collect();
        let c = inflate_cover(&f2, &frac(1, 10)).unwrap();
        assert_eq!(c.len(), Some(4));
        assert!(*c.declared_total() <= frac(4, 9) + frac(1, 10));
        for (k, raw) in f2.iter().enumerate() {
            assert!(raw.is_subset(&c.interval(k + 1)));
        }
        let e = inflate_cover(&[], &frac(1, 10)).unwrap();
        assert_eq!(*e.declared_total(), int(0));
        let s = inflate_cover(&[Interval::singleton(int(3))], &int(1)).unwrap();
        assert_eq!(
            s.interval(1),
            Interval::open(frac(5, 2), frac(7, 2)).unwrap()
        );
        assert!(inflate_cover(&[], &int(0)).is_err());
    }

    #[test]
    fn normalization() {
        assert_eq!(
            (1..=5).map(cantor_depth_for_level).collect::<Vec<_>>(),
            vec![4, 6, 7, 9, 11]
        );
        let c = cantor_null_cover(3).unwrap();
        assert!(*c.declared_total() <= int(1));
        let n = c.len().unwrap();
        c.check_prefix(n).unwrap();
        let single = normalize_cover(|_| vec![iv("(0,1/2)")], 1).unwrap();
        assert!(*single.declared_total() <= int(1));
        assert_eq!(single.first(1), vec![iv("(0,1/2)")]);
        assert!(matches!(
            normalize_cover(|_| vec![iv("(0,1)")], 1),
            Err(Error::LevelBudgetExceeded { level: 1, .. })
        ));
        // Every level covers F_{d(n)}, so later indices still cover probes.
        let l1 = cantor_null_level(1).unwrap().len();
        let tail = SimpleSet::normalize(c.first(n).into_iter().skip(l1));
        for x in [int(0), frac(1, 4), frac(3, 4), int(1), frac(2, 3)] {
            assert!(tail.contains(&x));
        }
    }

    #[test]
    fn g_functions() {
        let i = iv("(1,2)");
        assert_eq!(g_interval(&i, &frac(1, 2)), int(0));
        assert_eq!(g_interval(&i, &frac(3, 2)), frac(1, 2));
        assert_eq!(g_interval(&i, &int(3)), int(1));
        assert_eq!(g_interval(&i, &int(1)), int(0));
        assert_eq!(g_interval(&Interval::empty(), &int(5)), int(0));
        let c = Cover::finite(vec![iv("(0,1)"), iv("(2,5)")]);
        assert_eq!(riesz_g(&c, &int(-1), 2).0, int(0));
        assert_eq!(riesz_g(&c, &int(9), 2).0, int(4));
        assert_eq!(riesz_g(&c, &int(9), 1), (int(1), int(3)));
    }

    #[test]
    fn psi_values() {
        let dom = iv("[0,1]");
        let e = Cover::empty();
        assert_eq!(psi(&e, &dom, &frac(1, 3), 10).unwrap().0, frac(4, 3));
        assert_eq!(psi(&e, &dom, &int(0), 10).unwrap().0, int(1));
        let c = cantor_null_cover(2).unwrap();
        let n = c.len().unwrap();
        let (v, err) = psi(&c, &dom, &int(0), n).unwrap();
        assert!(v >= int(1));
        let (v2, _) = psi(&c, &dom, &int(0), n / 2).unwrap();
        assert!(v2 <= v && v <= &v2 + c.tail_bound(n / 2));
        assert!(err.is_positive());
        assert!(psi(&c, &dom, &int(2), 3).is_err());
    }

    #[test]
    fn partial_sum_function() {
        let c = Cover::finite(vec![iv("(0,1)"), iv("(1/2,2)"), iv("(5,6)")]);
        let f = riesz_partial(&c, &iv("[-1,7]"), 3).unwrap();
        for num in -8..=56 {
            let x = frac(num, 8);
            assert_eq!(f.eval_exact(&x).unwrap().0[0], riesz_g(&c, &x, 3).0, "{x}");
        }
    }

    #[test]
    fn blowup() {
        let c = cantor_null_cover(5).unwrap();
        let n = c.len().unwrap();
        let t = frac(1, 4);
        let w = blowup_witness(&c, &t, n).unwrap();
        assert!(w.k >= 5);
        assert!(w.delta.is_positive());
        assert!(verify_blowup(&c, &t, &w, 16).unwrap().passed());
        assert!(matches!(
            blowup_witness(&c, &int(5), n),
            Err(Error::NotCovered(_, _))
        ));
        let one = Cover::finite(vec![iv("(0,1)")]);
        assert_eq!(
            blowup_witness(&one, &frac(1, 4), 1).unwrap(),
            BlowupWitness {
                k: 1,
                delta: frac(1, 4),
                n: 1
            }
        );
    }

    #[test]
    fn file_format() {
        let c = Cover::parse("# demo\n(0,1/4)\n(1/2,3/4)\n# tail 1/8 1/2\n").unwrap();
        assert_eq!(c.len(), Some(2));
        assert_eq!(c.interval(3), Interval::empty());
        assert_eq!(*c.declared_total(), frac(1, 2) + frac(1, 32));
        assert!(Cover::parse("(0,1)\n# tail 1 2\n").is_err());
        assert!(Cover::parse("(0,\n").is_err());
    }
}
