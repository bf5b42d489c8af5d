//! Exact rationals and their `"num/den"` text form.

use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serializer};

pub type Q = Ratio<u64>;

pub fn q(num: u64, den: u64) -> Q {
    Ratio::new(num, den)
}

pub fn to_text(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let (a, b) = (a.trim().parse().ok()?, b.trim().parse::<u64>().ok()?);
            (b != 0).then(|| Ratio::new(a, b))
        }
        None => s.parse().ok().map(Ratio::from_integer),
    }
}

/// Closest rational with denominator `2^20` not above `x` (clamped to `[0, 1]`).
pub fn from_f64_floor(x: f64) -> Q {
    const DEN: u64 = 1 << 20;
    let x = x.clamp(0.0, 1.0);
    Ratio::new((x * DEN as f64).floor() as u64, DEN)
}

pub fn to_f64(x: &Q) -> f64 {
    *x.numer() as f64 / *x.denom() as f64
}

/// `x^k <= y` with `x = a/b`, `y = c/d`, compared exactly.
pub fn pow_le(x: &Q, k: u32, y: &Q) -> bool {
    let (a, b) = (*x.numer() as u128, *x.denom() as u128);
    let (c, d) = (*y.numer() as u128, *y.denom() as u128);
    match (a.checked_pow(k).and_then(|ak| ak.checked_mul(d)), b.checked_pow(k).and_then(|bk| bk.checked_mul(c))) {
        (Some(l), Some(r)) => l <= r,
        _ => to_f64(x).powi(k as i32) <= to_f64(y),
    }
}

pub mod serde_q {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&to_text(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}
