//! Interval arithmetic with outward rounding.
//!
//! Every real quantity in this crate is carried as a closed interval that is
//! guaranteed to contain the exact value (containment soundness). Two
//! endpoint backends are provided behind the same type:
//!
//! * hardware `f64`, with outward rounding obtained by nudging each computed
//!   endpoint one ulp outward (two ulps for `acos`/`asin`, whose libm
//!   implementations are not correctly rounded);
//! * arbitrary-precision binary floats (astro-float), which support directed
//!   rounding natively. The precision is carried per value.
//!
//! Mixed-backend operations promote the `f64` operand exactly into the
//! arbitrary-precision backend. Callers that hit an `Indeterminate`
//! comparison can rebuild their inputs at a higher precision and re-run the
//! same code path.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

use crate::{Error, Result};

/// Endpoint precision selector. `Double` is the hardware backend; `Bits(p)`
/// selects the software backend with `p`-bit mantissas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Double,
    Bits(usize),
}

impl Precision {
    pub fn bits(self) -> usize {
        match self {
            Precision::Double => 53,
            Precision::Bits(p) => p,
        }
    }
}

/// Three-valued certified comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    CertainlyGE,
    CertainlyLT,
    Indeterminate,
}

#[derive(Clone, Debug)]
pub struct BigIv {
    lo: BigFloat,
    hi: BigFloat,
    prec: usize,
}

/// A closed interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Debug)]
pub enum Interval {
    F64 { lo: f64, hi: f64 },
    Big(Box<BigIv>),
}

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constants cache"));
}

fn up(x: f64) -> f64 {
    if x.is_finite() {
        x.next_up()
    } else {
        x
    }
}

fn dn(x: f64) -> f64 {
    if x.is_finite() {
        x.next_down()
    } else {
        x
    }
}

fn big_neg(x: &BigFloat) -> BigFloat {
    let mut y = x.clone();
    y.inv_sign();
    y
}

fn big_cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
    match a.cmp(b) {
        Some(c) if c < 0 => Ordering::Less,
        Some(c) if c > 0 => Ordering::Greater,
        Some(_) => Ordering::Equal,
        None => panic!("NaN in interval endpoint"),
    }
}

fn big_min(a: BigFloat, b: BigFloat) -> BigFloat {
    if big_cmp(&a, &b) == Ordering::Greater {
        b
    } else {
        a
    }
}

fn big_max(a: BigFloat, b: BigFloat) -> BigFloat {
    if big_cmp(&a, &b) == Ordering::Less {
        b
    } else {
        a
    }
}

/// Converts a finite `BigFloat` to `f64`, rounding in the given direction.
fn big_to_f64(x: &BigFloat, rm: RoundingMode) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let mut y = x.clone();
    y.set_precision(53, rm).expect("set_precision");
    let (words, _n, sign, e, _inexact) = y.as_raw_parts().expect("finite value");
    let top = *words.last().expect("nonempty mantissa");
    debug_assert!(top & (1 << 63) != 0, "normalized mantissa");
    let mant = (top >> 11) as f64;
    let mag = mant * (e as f64 - 53.0).exp2();
    if sign == Sign::Neg {
        -mag
    } else {
        mag
    }
}

impl Interval {
    pub fn point(x: f64) -> Self {
        debug_assert!(x.is_finite());
        Interval::F64 { lo: x, hi: x }
    }

    pub fn of(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval::F64 { lo, hi }
    }

    pub fn from_int(n: i64) -> Self {
        // |n| <= 2^53 is exact in f64; all integer inputs in this crate are tiny.
        debug_assert!(n.abs() <= (1 << 53));
        Interval::point(n as f64)
    }

    pub fn zero() -> Self {
        Interval::point(0.0)
    }

    pub fn big_point(x: f64, prec: usize) -> Self {
        Interval::Big(Box::new(BigIv {
            lo: BigFloat::from_f64(x, prec),
            hi: BigFloat::from_f64(x, prec),
            prec,
        }))
    }

    pub fn precision(&self) -> Precision {
        match self {
            Interval::F64 { .. } => Precision::Double,
            Interval::Big(b) => Precision::Bits(b.prec),
        }
    }

    /// Exact promotion / outward demotion to the requested backend.
    pub fn to_precision(&self, p: Precision) -> Self {
        match (self, p) {
            (Interval::F64 { .. }, Precision::Double) => self.clone(),
            (Interval::F64 { lo, hi }, Precision::Bits(prec)) => Interval::Big(Box::new(BigIv {
                lo: BigFloat::from_f64(*lo, prec),
                hi: BigFloat::from_f64(*hi, prec),
                prec,
            })),
            (Interval::Big(_), Precision::Double) => Interval::F64 {
                lo: self.lo_f64(),
                hi: self.hi_f64(),
            },
            (Interval::Big(b), Precision::Bits(prec)) => {
                let mut lo = b.lo.clone();
                let mut hi = b.hi.clone();
                lo.set_precision(prec, RoundingMode::Down).expect("set_precision");
                hi.set_precision(prec, RoundingMode::Up).expect("set_precision");
                Interval::Big(Box::new(BigIv { lo, hi, prec }))
            }
        }
    }

    /// Lower endpoint as an `f64` rounded toward -inf (sound outer bound).
    pub fn lo_f64(&self) -> f64 {
        match self {
            Interval::F64 { lo, .. } => *lo,
            Interval::Big(b) => big_to_f64(&b.lo, RoundingMode::Down),
        }
    }

    /// Upper endpoint as an `f64` rounded toward +inf (sound outer bound).
    pub fn hi_f64(&self) -> f64 {
        match self {
            Interval::F64 { hi, .. } => *hi,
            Interval::Big(b) => big_to_f64(&b.hi, RoundingMode::Up),
        }
    }

    pub fn mid_f64(&self) -> f64 {
        let (lo, hi) = (self.lo_f64(), self.hi_f64());
        lo + (hi - lo) / 2.0
    }

    /// Upper bound on the interval width.
    pub fn width(&self) -> f64 {
        match self {
            Interval::F64 { lo, hi } => up(hi - lo),
            Interval::Big(b) => {
                let w = b.hi.sub(&b.lo, b.prec, RoundingMode::Up);
                if w.is_zero() {
                    0.0
                } else {
                    big_to_f64(&w, RoundingMode::Up)
                }
            }
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo_f64() <= x && x <= self.hi_f64()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo_f64() <= self.lo_f64() && self.hi_f64() <= other.hi_f64()
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo_f64() > 0.0
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi_f64() < 0.0
    }

    fn big_parts(&self, prec: usize) -> (BigFloat, BigFloat) {
        match self {
            Interval::F64 { lo, hi } => {
                (BigFloat::from_f64(*lo, prec), BigFloat::from_f64(*hi, prec))
            }
            Interval::Big(b) => (b.lo.clone(), b.hi.clone()),
        }
    }

    fn join_prec(&self, other: &Interval) -> Option<usize> {
        match (self, other) {
            (Interval::F64 { .. }, Interval::F64 { .. }) => None,
            (Interval::Big(a), Interval::Big(b)) => Some(a.prec.max(b.prec)),
            (Interval::Big(a), _) => Some(a.prec),
            (_, Interval::Big(b)) => Some(b.prec),
        }
    }

    pub fn add_iv(&self, other: &Interval) -> Interval {
        match self.join_prec(other) {
            None => {
                let (a, b) = self.f64_parts();
                let (c, d) = other.f64_parts();
                Interval::F64 { lo: dn(a + c), hi: up(b + d) }
            }
            Some(p) => {
                let (a, b) = self.big_parts(p);
                let (c, d) = other.big_parts(p);
                Interval::Big(Box::new(BigIv {
                    lo: a.add(&c, p, RoundingMode::Down),
                    hi: b.add(&d, p, RoundingMode::Up),
                    prec: p,
                }))
            }
        }
    }

    pub fn sub_iv(&self, other: &Interval) -> Interval {
        match self.join_prec(other) {
            None => {
                let (a, b) = self.f64_parts();
                let (c, d) = other.f64_parts();
                Interval::F64 { lo: dn(a - d), hi: up(b - c) }
            }
            Some(p) => {
                let (a, b) = self.big_parts(p);
                let (c, d) = other.big_parts(p);
                Interval::Big(Box::new(BigIv {
                    lo: a.sub(&d, p, RoundingMode::Down),
                    hi: b.sub(&c, p, RoundingMode::Up),
                    prec: p,
                }))
            }
        }
    }

    pub fn mul_iv(&self, other: &Interval) -> Interval {
        match self.join_prec(other) {
            None => {
                let (a, b) = self.f64_parts();
                let (c, d) = other.f64_parts();
                let cands = [a * c, a * d, b * c, b * d];
                let lo = cands.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = cands.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                Interval::F64 { lo: dn(lo), hi: up(hi) }
            }
            Some(p) => {
                let (a, b) = self.big_parts(p);
                let (c, d) = other.big_parts(p);
                let lo = big_min(
                    big_min(a.mul(&c, p, RoundingMode::Down), a.mul(&d, p, RoundingMode::Down)),
                    big_min(b.mul(&c, p, RoundingMode::Down), b.mul(&d, p, RoundingMode::Down)),
                );
                let hi = big_max(
                    big_max(a.mul(&c, p, RoundingMode::Up), a.mul(&d, p, RoundingMode::Up)),
                    big_max(b.mul(&c, p, RoundingMode::Up), b.mul(&d, p, RoundingMode::Up)),
                );
                Interval::Big(Box::new(BigIv { lo, hi, prec: p }))
            }
        }
    }

    /// Division; the divisor must not contain zero.
    pub fn checked_div(&self, other: &Interval) -> Result<Interval> {
        if other.contains_zero() {
            return Err(Error::DivisionByIntervalContainingZero);
        }
        Ok(match self.join_prec(other) {
            None => {
                let (a, b) = self.f64_parts();
                let (c, d) = other.f64_parts();
                let cands = [a / c, a / d, b / c, b / d];
                let lo = cands.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = cands.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                Interval::F64 { lo: dn(lo), hi: up(hi) }
            }
            Some(p) => {
                let (a, b) = self.big_parts(p);
                let (c, d) = other.big_parts(p);
                let lo = big_min(
                    big_min(a.div(&c, p, RoundingMode::Down), a.div(&d, p, RoundingMode::Down)),
                    big_min(b.div(&c, p, RoundingMode::Down), b.div(&d, p, RoundingMode::Down)),
                );
                let hi = big_max(
                    big_max(a.div(&c, p, RoundingMode::Up), a.div(&d, p, RoundingMode::Up)),
                    big_max(b.div(&c, p, RoundingMode::Up), b.div(&d, p, RoundingMode::Up)),
                );
                Interval::Big(Box::new(BigIv { lo, hi, prec: p }))
            }
        })
    }

    fn f64_parts(&self) -> (f64, f64) {
        match self {
            Interval::F64 { lo, hi } => (*lo, *hi),
            Interval::Big(_) => (self.lo_f64(), self.hi_f64()),
        }
    }

    pub fn neg_iv(&self) -> Interval {
        match self {
            Interval::F64 { lo, hi } => Interval::F64 { lo: -hi, hi: -lo },
            Interval::Big(b) => Interval::Big(Box::new(BigIv {
                lo: big_neg(&b.hi),
                hi: big_neg(&b.lo),
                prec: b.prec,
            })),
        }
    }

    /// Tight square: `[0, max(lo^2, hi^2)]` when the interval straddles zero.
    pub fn square(&self) -> Interval {
        match self {
            Interval::F64 { lo, hi } => {
                let (a, b) = (lo * lo, hi * hi);
                if *lo <= 0.0 && 0.0 <= *hi {
                    Interval::F64 { lo: 0.0, hi: up(a.max(b)) }
                } else {
                    Interval::F64 { lo: dn(a.min(b)), hi: up(a.max(b)) }
                }
            }
            Interval::Big(b) => {
                let p = b.prec;
                let ll = b.lo.mul(&b.lo, p, RoundingMode::Down);
                let lu = b.lo.mul(&b.lo, p, RoundingMode::Up);
                let hl = b.hi.mul(&b.hi, p, RoundingMode::Down);
                let hu = b.hi.mul(&b.hi, p, RoundingMode::Up);
                let straddles = b.lo.is_negative() && b.hi.is_positive();
                let lo = if straddles {
                    BigFloat::from_f64(0.0, p)
                } else {
                    big_min(ll, hl)
                };
                Interval::Big(Box::new(BigIv { lo, hi: big_max(lu, hu), prec: p }))
            }
        }
    }

    /// Square root with the domain clamped to `[0, inf)`.
    pub fn sqrt(&self) -> Result<Interval> {
        match self {
            Interval::F64 { lo, hi } => {
                if *hi < 0.0 {
                    return Err(Error::EmptyDomainIntersection);
                }
                let l = lo.max(0.0);
                Ok(Interval::F64 { lo: dn(l.sqrt()).max(0.0), hi: up(hi.sqrt()) })
            }
            Interval::Big(b) => {
                if b.hi.is_negative() {
                    return Err(Error::EmptyDomainIntersection);
                }
                let p = b.prec;
                let zero = BigFloat::from_f64(0.0, p);
                let l = big_max(b.lo.clone(), zero.clone());
                Ok(Interval::Big(Box::new(BigIv {
                    lo: l.sqrt(p, RoundingMode::Down),
                    hi: b.hi.sqrt(p, RoundingMode::Up),
                    prec: p,
                })))
            }
        }
    }

    /// Arc cosine with the domain clamped to `[-1, 1]`.
    pub fn acos(&self) -> Result<Interval> {
        match self {
            Interval::F64 { lo, hi } => {
                if *lo > 1.0 || *hi < -1.0 {
                    return Err(Error::EmptyDomainIntersection);
                }
                let l = lo.max(-1.0);
                let h = hi.min(1.0);
                // libm acos is within 1 ulp on glibc; nudge two to be safe.
                let out_lo = dn(dn(h.acos())).max(0.0);
                let out_hi = up(up(l.acos())).min(PI_HI);
                Ok(Interval::F64 { lo: out_lo, hi: out_hi })
            }
            Interval::Big(b) => {
                let p = b.prec;
                let one = BigFloat::from_f64(1.0, p);
                let neg_one = BigFloat::from_f64(-1.0, p);
                if big_cmp(&b.lo, &one) == Ordering::Greater
                    || big_cmp(&b.hi, &neg_one) == Ordering::Less
                {
                    return Err(Error::EmptyDomainIntersection);
                }
                let l = big_max(b.lo.clone(), neg_one);
                let h = big_min(b.hi.clone(), one);
                CONSTS.with(|cc| {
                    let cc = &mut *cc.borrow_mut();
                    Ok(Interval::Big(Box::new(BigIv {
                        lo: h.acos(p, RoundingMode::Down, cc),
                        hi: l.acos(p, RoundingMode::Up, cc),
                        prec: p,
                    })))
                })
            }
        }
    }

    /// Arc sine with the domain clamped to `[-1, 1]`.
    pub fn asin(&self) -> Result<Interval> {
        match self {
            Interval::F64 { lo, hi } => {
                if *lo > 1.0 || *hi < -1.0 {
                    return Err(Error::EmptyDomainIntersection);
                }
                let l = lo.max(-1.0);
                let h = hi.min(1.0);
                Ok(Interval::F64 { lo: dn(dn(l.asin())), hi: up(up(h.asin())) })
            }
            Interval::Big(b) => {
                let p = b.prec;
                let one = BigFloat::from_f64(1.0, p);
                let neg_one = BigFloat::from_f64(-1.0, p);
                if big_cmp(&b.lo, &one) == Ordering::Greater
                    || big_cmp(&b.hi, &neg_one) == Ordering::Less
                {
                    return Err(Error::EmptyDomainIntersection);
                }
                let l = big_max(b.lo.clone(), neg_one);
                let h = big_min(b.hi.clone(), one);
                CONSTS.with(|cc| {
                    let cc = &mut *cc.borrow_mut();
                    Ok(Interval::Big(Box::new(BigIv {
                        lo: l.asin(p, RoundingMode::Down, cc),
                        hi: h.asin(p, RoundingMode::Up, cc),
                        prec: p,
                    })))
                })
            }
        }
    }

    /// Absolute value; exact on endpoints.
    pub fn abs_iv(&self) -> Interval {
        match self {
            Interval::F64 { lo, hi } => {
                if *lo >= 0.0 {
                    self.clone()
                } else if *hi <= 0.0 {
                    Interval::F64 { lo: -hi, hi: -lo }
                } else {
                    Interval::F64 { lo: 0.0, hi: (-lo).max(*hi) }
                }
            }
            Interval::Big(b) => {
                if !b.lo.is_negative() {
                    self.clone()
                } else if !b.hi.is_positive() {
                    self.neg_iv()
                } else {
                    Interval::Big(Box::new(BigIv {
                        lo: BigFloat::from_f64(0.0, b.prec),
                        hi: big_max(big_neg(&b.lo), b.hi.clone()),
                        prec: b.prec,
                    }))
                }
            }
        }
    }

    /// Pointwise minimum of two quantities.
    pub fn min_iv(&self, other: &Interval) -> Interval {
        match self.join_prec(other) {
            None => {
                let (a, b) = self.f64_parts();
                let (c, d) = other.f64_parts();
                Interval::F64 { lo: a.min(c), hi: b.min(d) }
            }
            Some(p) => {
                let (a, b) = self.big_parts(p);
                let (c, d) = other.big_parts(p);
                Interval::Big(Box::new(BigIv {
                    lo: big_min(a, c),
                    hi: big_min(b, d),
                    prec: p,
                }))
            }
        }
    }

    /// Convex hull of two intervals.
    pub fn hull(&self, other: &Interval) -> Interval {
        match self.join_prec(other) {
            None => {
                let (a, b) = self.f64_parts();
                let (c, d) = other.f64_parts();
                Interval::F64 { lo: a.min(c), hi: b.max(d) }
            }
            Some(p) => {
                let (a, b) = self.big_parts(p);
                let (c, d) = other.big_parts(p);
                Interval::Big(Box::new(BigIv {
                    lo: big_min(a, c),
                    hi: big_max(b, d),
                    prec: p,
                }))
            }
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        match self.join_prec(other) {
            None => {
                let (a, b) = self.f64_parts();
                let (c, d) = other.f64_parts();
                let lo = a.max(c);
                let hi = b.min(d);
                if lo <= hi {
                    Some(Interval::F64 { lo, hi })
                } else {
                    None
                }
            }
            Some(p) => {
                let (a, b) = self.big_parts(p);
                let (c, d) = other.big_parts(p);
                let lo = big_max(a, c);
                let hi = big_min(b, d);
                if big_cmp(&lo, &hi) != Ordering::Greater {
                    Some(Interval::Big(Box::new(BigIv { lo, hi, prec: p })))
                } else {
                    None
                }
            }
        }
    }

    /// Certified comparison: `CertainlyGE` iff `self.lo >= other.hi`,
    /// `CertainlyLT` iff `self.hi < other.lo`.
    pub fn compare(&self, other: &Interval) -> Cmp {
        match self.join_prec(other) {
            None => {
                let (a, b) = self.f64_parts();
                let (c, d) = other.f64_parts();
                if a >= d {
                    Cmp::CertainlyGE
                } else if b < c {
                    Cmp::CertainlyLT
                } else {
                    Cmp::Indeterminate
                }
            }
            Some(p) => {
                let (a, b) = self.big_parts(p);
                let (c, d) = other.big_parts(p);
                if big_cmp(&a, &d) != Ordering::Less {
                    Cmp::CertainlyGE
                } else if big_cmp(&b, &c) == Ordering::Less {
                    Cmp::CertainlyLT
                } else {
                    Cmp::Indeterminate
                }
            }
        }
    }
}

// f64 nearest to pi lies below pi, so [v, next_up(v)] encloses it.
const PI_LO: f64 = std::f64::consts::PI;
const PI_HI: f64 = 3.1415926535897936;

/// Certified enclosure of pi at the requested precision.
pub fn pi(p: Precision) -> Interval {
    match p {
        Precision::Double => Interval::F64 { lo: PI_LO, hi: PI_HI },
        Precision::Bits(prec) => CONSTS.with(|cc| {
            let cc = &mut *cc.borrow_mut();
            Interval::Big(Box::new(BigIv {
                lo: cc.pi(prec, RoundingMode::Down),
                hi: cc.pi(prec, RoundingMode::Up),
                prec,
            }))
        }),
    }
}

/// Certified enclosure of 2*pi, computed as `2 * pi()` in interval arithmetic.
pub fn two_pi(p: Precision) -> Interval {
    &Interval::from_int(2) * &pi(p)
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        self.add_iv(rhs)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        self.sub_iv(rhs)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        self.mul_iv(rhs)
    }
}

impl Div for &Interval {
    type Output = Interval;
    /// Panics if the divisor contains zero; interior code certifies
    /// denominators before dividing, so reaching the panic is a bug.
    fn div(self, rhs: &Interval) -> Interval {
        self.checked_div(rhs).expect("division by interval containing zero")
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        self.neg_iv()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.17e}, {:.17e}]", self.lo_f64(), self.hi_f64())
    }
}

/// Formats an `f64` as a lowercase C99 hex-float literal (bit-exact).
pub fn f64_to_hex(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0x0p+0".into() } else { "0x0p+0".into() };
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x < 0.0 { "-inf".into() } else { "inf".into() };
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 1 { "-" } else { "" };
    let biased = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (lead, exp, frac) = if biased == 0 {
        // subnormal: value = 0.frac * 2^-1022
        (0u64, -1022i64, frac)
    } else {
        (1u64, biased - 1023, frac)
    };
    let mut hex = format!("{frac:013x}");
    while hex.len() > 1 && hex.ends_with('0') {
        hex.pop();
    }
    if hex == "0" {
        format!("{sign}0x{lead}p{exp:+}")
    } else {
        format!("{sign}0x{lead}.{hex}p{exp:+}")
    }
}

/// Parses the hex-float form produced by [`f64_to_hex`].
pub fn f64_from_hex(s: &str) -> Result<f64> {
    let t = s.trim();
    let (neg, t) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t),
    };
    match t {
        "inf" => return Ok(if neg { f64::NEG_INFINITY } else { f64::INFINITY }),
        "nan" => return Ok(f64::NAN),
        _ => {}
    }
    let t = t.strip_prefix("0x").ok_or_else(|| Error::InvalidHexFloat(s.into()))?;
    let pidx = t.find(['p', 'P']).ok_or_else(|| Error::InvalidHexFloat(s.into()))?;
    let (mant, exp) = t.split_at(pidx);
    let exp: i64 = exp[1..].parse().map_err(|_| Error::InvalidHexFloat(s.into()))?;
    let (int_part, frac_part) = match mant.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mant, ""),
    };
    let mut value: u128 = u128::from_str_radix(int_part, 16).map_err(|_| Error::InvalidHexFloat(s.into()))?;
    let mut scale = 0i64;
    for c in frac_part.chars() {
        let d = c.to_digit(16).ok_or_else(|| Error::InvalidHexFloat(s.into()))? as u128;
        value = value
            .checked_mul(16)
            .and_then(|v| v.checked_add(d))
            .ok_or_else(|| Error::InvalidHexFloat(s.into()))?;
        scale += 4;
    }
    let mag = value as f64 * ((exp - scale) as f64).exp2();
    Ok(if neg { -mag } else { mag })
}

/// Serialized form of an interval: both endpoints as hex-float strings.
pub fn interval_to_hex(iv: &Interval) -> (String, String) {
    (f64_to_hex(iv.lo_f64()), f64_to_hex(iv.hi_f64()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::of(lo, hi)
    }

    #[test]
    fn add_exact_endpoints() {
        let c = &iv(1.0, 2.0) + &iv(3.0, 4.0);
        assert!(c.lo_f64() <= 4.0 && c.hi_f64() >= 6.0);
        assert!(c.lo_f64() >= 4.0 - 1e-14 && c.hi_f64() <= 6.0 + 1e-14);
    }

    #[test]
    fn mul_sign_cases() {
        let c = &iv(-1.0, 2.0) * &iv(3.0, 3.0);
        assert!(c.contains(-3.0) && c.contains(6.0));
        assert!(c.lo_f64() >= -3.0 - 1e-13 && c.hi_f64() <= 6.0 + 1e-13);
    }

    #[test]
    fn div_one_third_has_positive_width() {
        let c = Interval::point(1.0).checked_div(&Interval::point(3.0)).unwrap();
        assert!(c.contains(1.0 / 3.0));
        assert!(c.width() > 0.0);
        assert!(c.lo_f64() < 1.0 / 3.0 + 1e-16 && c.hi_f64() > 1.0 / 3.0 - 1e-16);
    }

    #[test]
    fn div_by_zero_interval_errors() {
        let e = Interval::point(1.0).checked_div(&iv(-1.0, 1.0));
        assert!(matches!(e, Err(Error::DivisionByIntervalContainingZero)));
    }

    #[test]
    fn sqrt_exact_and_clamped() {
        let c = iv(4.0, 9.0).sqrt().unwrap();
        assert!(c.contains(2.0) && c.contains(3.0));
        assert!(c.lo_f64() >= 2.0 - 1e-14 && c.hi_f64() <= 3.0 + 1e-14);
        let c = iv(-1.0, 4.0).sqrt().unwrap();
        assert!(c.lo_f64() == 0.0 && c.contains(2.0));
        assert!(iv(-2.0, -1.0).sqrt().is_err());
    }

    #[test]
    fn acos_endpoints() {
        let c = Interval::point(1.0).acos().unwrap();
        assert!(c.contains(0.0) && c.hi_f64() >= 0.0);
        let c = iv(-1.0, 1.0).acos().unwrap();
        assert!(c.lo_f64() <= 0.0 + 1e-15 && c.hi_f64() >= std::f64::consts::PI);
        assert!(iv(1.5, 2.0).acos().is_err());
    }

    #[test]
    fn compare_cases() {
        assert_eq!(iv(3.0, 4.0).compare(&iv(1.0, 2.0)), Cmp::CertainlyGE);
        assert_eq!(iv(1.0, 3.0).compare(&iv(2.0, 4.0)), Cmp::Indeterminate);
        assert_eq!(Interval::point(0.0).compare(&Interval::point(0.0)), Cmp::CertainlyGE);
        assert_eq!(iv(1.0, 2.0).compare(&iv(2.5, 3.0)), Cmp::CertainlyLT);
    }

    #[test]
    fn pi_enclosure() {
        let p = pi(Precision::Double);
        assert!(p.lo_f64() >= 3.14159265358979 && p.hi_f64() <= 3.14159265358980);
        assert!(p.width() > 0.0);
        let tp = two_pi(Precision::Double);
        let doubled = &Interval::from_int(2) * &p;
        assert_eq!(tp.lo_f64(), doubled.lo_f64());
        assert_eq!(tp.hi_f64(), doubled.hi_f64());
        let pb = pi(Precision::Bits(192));
        assert!(pb.is_subset_of(&p));
        assert!(pb.width() > 0.0);
    }

    #[test]
    fn big_roundtrip_f64() {
        let vals = [
            0.056, 2.78, 1.0, -3.5e-13, 0.6510501858826092, 123456.789, -0.25,
        ];
        for &v in &vals {
            let b = Interval::big_point(v, 192);
            assert_eq!(b.lo_f64(), v, "{v}");
            assert_eq!(b.hi_f64(), v, "{v}");
        }
    }

    #[test]
    fn big_demotion_outward() {
        let third = Interval::big_point(1.0, 192)
            .checked_div(&Interval::big_point(3.0, 192))
            .unwrap();
        let f = third.to_precision(Precision::Double);
        assert!(f.contains(1.0 / 3.0));
        assert!(f.lo_f64() < f.hi_f64());
    }

    #[test]
    fn mixed_backend_promotes() {
        let a = Interval::big_point(2.0, 128);
        let b = Interval::point(0.5);
        let c = &a * &b;
        assert!(matches!(c.precision(), Precision::Bits(128)));
        assert!(c.contains(1.0));
    }

    #[test]
    fn hex_roundtrip() {
        for &v in &[
            0.0, -0.0, 1.0, -1.5, 0.056, 2.78, std::f64::consts::PI, 1e-300, -2.2250738585072014e-308,
            f64::MIN_POSITIVE, 5e-324, f64::MAX,
        ] {
            let s = f64_to_hex(v);
            let back = f64_from_hex(&s).unwrap();
            assert_eq!(v.to_bits(), back.to_bits(), "{v} -> {s}");
        }
        assert_eq!(f64_to_hex(1.0), "0x1p+0");
    }

    #[test]
    fn abs_exact() {
        let c = iv(-2.0, 1.0).abs_iv();
        assert_eq!(c.lo_f64(), 0.0);
        assert_eq!(c.hi_f64(), 2.0);
    }
}
