//! Real-root counting with Sturm sequences in exact integer arithmetic.
//!
//! Every finite `f64` is a dyadic rational, so a real-coefficient polynomial
//! is a rational multiple of an integer polynomial. The Sturm chain is built
//! from the subresultant remainder sequence (exact divisions, no content
//! computations), with the sign of each element tracked separately so that
//! the chain is a positive rescaling of the classical `−rem` chain.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

/// Dense integer polynomial, lowest degree first, no trailing zeros
/// (the zero polynomial is empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct IntPoly(Vec<BigInt>);

impl IntPoly {
    fn trimmed(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        IntPoly(c)
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lc(&self) -> &BigInt {
        self.0.last().expect("leading coefficient of zero polynomial")
    }

    fn derivative(&self) -> IntPoly {
        IntPoly::trimmed(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// `prem(a, b) = lc(b)^{δ+1} a mod b`.
    fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree();
        let lb = b.lc();
        let mut r = self.0.clone();
        let mut e = self.degree() as isize - db as isize + 1;
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= lb;
            }
            let shift = dr - db;
            for (i, bc) in b.0.iter().enumerate() {
                r[shift + i] -= &lr * bc;
            }
            debug_assert!(r[dr].is_zero());
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            e -= 1;
        }
        if e > 0 {
            let f = num_traits::pow(lb.clone(), e as usize);
            for c in r.iter_mut() {
                *c *= &f;
            }
        }
        IntPoly::trimmed(r)
    }

    fn exact_div(&self, d: &BigInt) -> IntPoly {
        IntPoly(
            self.0
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(d);
                    debug_assert!(r.is_zero(), "inexact division in subresultant sequence");
                    q
                })
                .collect(),
        )
    }

    /// Sign of the value at the dyadic rational `x`.
    fn sign_at(&self, x: &Dyadic) -> Sign {
        if self.is_zero() {
            return Sign::NoSign;
        }
        // Homogeneous Horner: Σ c_k m^k D^{d−k} with D = 2^shift > 0.
        let d = self.degree();
        let mut acc = self.0[d].clone();
        let mut dpow = BigInt::one();
        for k in (0..d).rev() {
            dpow <<= x.shift;
            acc = acc * &x.mantissa + &self.0[k] * &dpow;
        }
        acc.sign()
    }
}

/// `mantissa / 2^shift`.
#[derive(Clone, Debug)]
struct Dyadic {
    mantissa: BigInt,
    shift: usize,
}

impl Dyadic {
    fn from_f64(x: f64) -> Self {
        let (m, e) = decode_f64(x);
        if e >= 0 {
            Dyadic {
                mantissa: BigInt::from(m) << e as usize,
                shift: 0,
            }
        } else {
            Dyadic {
                mantissa: BigInt::from(m),
                shift: (-e) as usize,
            }
        }
    }
}

/// `x = m · 2^e` exactly, with `m` odd (or zero).
fn decode_f64(x: f64) -> (i64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let negative = bits >> 63 == 1;
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & ((1u64 << 52) - 1);
    let (mut m, mut e) = if biased == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), biased - 1075)
    };
    let tz = m.trailing_zeros();
    m >>= tz;
    e += tz as i32;
    let m = m as i64;
    (if negative { -m } else { m }, e)
}

/// Integer polynomial proportional (by a positive factor) to `p`.
pub(crate) fn to_int_poly(p: &Polynomial) -> Result<IntPoly> {
    if !p.is_real() {
        return Err(Error::domain("Sturm counting needs real coefficients"));
    }
    let decoded: Vec<(i64, i32)> = p.coeffs().iter().map(|c| decode_f64(c.re)).collect();
    let e_min = decoded
        .iter()
        .filter(|(m, _)| *m != 0)
        .map(|&(_, e)| e)
        .min()
        .ok_or_else(|| Error::domain("Sturm chain of the zero polynomial"))?;
    Ok(IntPoly::trimmed(
        decoded
            .into_iter()
            .map(|(m, e)| BigInt::from(m) << (e - e_min) as usize)
            .collect(),
    ))
}

/// A Sturm chain `T₀ = P, T₁ = P', …`, stored as subresultants plus signs.
#[derive(Clone, Debug)]
pub(crate) struct SturmChain {
    elems: Vec<(IntPoly, i8)>,
}

impl SturmChain {
    pub(crate) fn new(p: IntPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::domain("Sturm chain of the zero polynomial"));
        }
        let dp = p.derivative();
        let mut elems = vec![(p, 1i8)];
        if dp.is_zero() {
            return Ok(Self { elems });
        }
        elems.push((dp, 1));

        // Subresultant PRS with sign bookkeeping:
        // rem(S_{i−1}, S_i) = β_i S_{i+1} / lc(S_i)^{δ+1}.
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let len = elems.len();
            let (a, eps_a) = (&elems[len - 2].0, elems[len - 2].1);
            let b = &elems[len - 1].0;
            let delta = a.degree() - b.degree();
            let r = a.pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            let beta = &g * num_traits::pow(h.clone(), delta);
            let next = r.exact_div(&beta);

            let lc_sign = if b.lc().is_negative() && (delta + 1) % 2 == 1 { -1 } else { 1 };
            let beta_sign = if beta.is_negative() { -1 } else { 1 };
            let eps_next = -eps_a * beta_sign * lc_sign;

            g = b.lc().clone();
            // h ← g^δ / h^{δ−1}
            h = if delta == 1 {
                g.clone()
            } else {
                let num = num_traits::pow(g.clone(), delta);
                let den = num_traits::pow(h, delta - 1);
                num / den
            };
            let done = next.degree() == 0;
            elems.push((next, eps_next));
            if done {
                break;
            }
        }
        Ok(Self { elems })
    }

    /// The last chain element: `gcd(P, P')` up to a constant.
    pub(crate) fn gcd(&self) -> &IntPoly {
        &self.elems.last().unwrap().0
    }

    fn variations<I: Iterator<Item = Sign>>(signs: I) -> usize {
        let mut count = 0;
        let mut last = Sign::NoSign;
        for s in signs {
            if s == Sign::NoSign {
                continue;
            }
            if last != Sign::NoSign && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    fn apply(eps: i8, s: Sign) -> Sign {
        if eps < 0 { -s } else { s }
    }

    fn variations_at(&self, x: &Dyadic) -> usize {
        Self::variations(self.elems.iter().map(|(q, eps)| Self::apply(*eps, q.sign_at(x))))
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::variations(self.elems.iter().map(|(q, eps)| {
            let mut s = q.lc().sign();
            if !positive && q.degree() % 2 == 1 {
                s = -s;
            }
            Self::apply(*eps, s)
        }))
    }

    /// Distinct real roots on the whole line.
    pub(crate) fn count_all(&self) -> usize {
        self.variations_at_infinity(false)
            .saturating_sub(self.variations_at_infinity(true))
    }

    fn leading_poly(&self) -> &IntPoly {
        &self.elems[0].0
    }

    /// Distinct real roots in `(a, b]`, nudging endpoints outward when the
    /// polynomial vanishes there.
    pub(crate) fn count_distinct(&self, a: f64, b: f64) -> usize {
        let a = nudge(self.leading_poly(), a, f64::next_down);
        let b = nudge(self.leading_poly(), b, f64::next_up);
        let va = match a {
            x if x == f64::NEG_INFINITY => self.variations_at_infinity(false),
            x => self.variations_at(&Dyadic::from_f64(x)),
        };
        let vb = match b {
            x if x == f64::INFINITY => self.variations_at_infinity(true),
            x => self.variations_at(&Dyadic::from_f64(x)),
        };
        va.saturating_sub(vb)
    }
}

fn nudge(p: &IntPoly, mut x: f64, step: fn(f64) -> f64) -> f64 {
    if x.is_finite() && p.sign_at(&Dyadic::from_f64(x)) == Sign::NoSign {
        for _ in 0..8 {
            x = step(x);
        }
    }
    x
}

/// Distinct and multiplicity-weighted real root counts on an interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RealRootCount {
    pub distinct: usize,
    pub with_multiplicity: usize,
}

fn check_interval(a: f64, b: f64) -> Result<()> {
    if a.is_nan() || b.is_nan() || !(a < b) {
        return Err(Error::domain(format!("need a < b, got ({a}, {b}]")));
    }
    Ok(())
}

/// Number of distinct real roots of `p` in `(a, b]`.
pub fn sturm_count(p: &Polynomial, a: f64, b: f64) -> Result<usize> {
    check_interval(a, b)?;
    Ok(SturmChain::new(to_int_poly(p)?)?.count_distinct(a, b))
}

/// Real roots in `(a, b]`, both distinct and with multiplicity.
///
/// Multiplicities come from the square-free tower `g₀ = P, g_{i+1} = gcd(gᵢ, gᵢ')`:
/// a root of multiplicity `μ` is a simple root of each of `g₀..g_{μ−1}`.
pub fn real_root_count(p: &Polynomial, a: f64, b: f64) -> Result<RealRootCount> {
    check_interval(a, b)?;
    let mut chain = SturmChain::new(to_int_poly(p)?)?;
    let distinct = chain.count_distinct(a, b);
    let mut total = distinct;
    while chain.gcd().degree() > 0 {
        chain = SturmChain::new(chain.gcd().clone())?;
        total += chain.count_distinct(a, b);
    }
    Ok(RealRootCount {
        distinct,
        with_multiplicity: total,
    })
}

/// Cauchy's bound `1 + max |λₖ/λₙ|`, rounded up.
pub fn cauchy_bound(p: &Polynomial) -> f64 {
    let lead = p.coeffs()[p.degree()].norm();
    let m = p.coeffs()[..p.degree()]
        .iter()
        .map(|c| c.norm() / lead)
        .fold(0.0, f64::max);
    (1.0 + m) * (1.0 + 1e-12)
}

/// All real zeros counted with multiplicity, from Sturm chains alone.
///
/// Variations are taken at `±∞`, which only needs leading coefficients;
/// every real zero lies inside [`cauchy_bound`] anyway.
pub fn count_real_exact(p: &Polynomial) -> Result<usize> {
    let mut chain = SturmChain::new(to_int_poly(p)?)?;
    let mut total = chain.count_all();
    while chain.gcd().degree() > 0 {
        chain = SturmChain::new(chain.gcd().clone())?;
        total += chain.count_all();
    }
    Ok(total)
}
