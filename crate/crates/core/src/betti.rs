//! Lower bounds on odd Betti numbers from `b_2`, and a catalog auditor.

use alloc::string::String;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest `k` with `2^k` representable in a `u128`.
const MAX_EXPONENT: u32 = 127;

/// `k = (b2 - 1) / 2` for odd `b2`, `(b2 - 2) / 2` for even `b2`, and
/// `b2 / 2` when `4 | b2` and the improvement is requested.
pub fn bound_exponent(b2: u64, div4_improve: bool) -> Result<u32> {
    if b2 < 3 {
        return Err(Error::TooSmall(b2 as u32));
    }
    let k = if div4_improve && b2.is_multiple_of(4) {
        b2 / 2
    } else if b2 % 2 == 1 {
        (b2 - 1) / 2
    } else {
        (b2 - 2) / 2
    };
    if k > u64::from(MAX_EXPONENT) {
        return Err(Error::OutOfRange(b2));
    }
    Ok(k as u32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundStatus {
    Pass,
    Tight,
    Vacuous,
    Fail,
}

impl BoundStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            BoundStatus::Pass => "pass",
            BoundStatus::Tight => "tight",
            BoundStatus::Vacuous => "vacuous",
            BoundStatus::Fail => "fail",
        }
    }

    /// Everything but `Fail` is consistent with the bound.
    pub fn is_ok(self) -> bool {
        self != BoundStatus::Fail
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub k: u32,
    pub bound: u128,
    pub status: BoundStatus,
    /// Degree of the Betti number compared against the bound.
    pub degree: u32,
}

impl BoundResult {
    fn compare(k: u32, degree: u32, value: u64) -> Self {
        let bound = 1u128 << k;
        let status = match u128::from(value) {
            0 => BoundStatus::Vacuous,
            v if v == bound => BoundStatus::Tight,
            v if v > bound => BoundStatus::Pass,
            _ => BoundStatus::Fail,
        };
        BoundResult {
            k,
            bound,
            status,
            degree,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    /// Real dimension `2n`.
    pub dim2n: u32,
    pub b2: u64,
    pub b3: Option<u64>,
    /// Lowest odd degree with nonzero Betti number, with that number.
    pub b_odd_first_nonzero: Option<(u32, u64)>,
    /// Whether `H^{2n-3}` vanishes; `None` when unknown.
    pub h_2n_minus_3_vanishes: Option<bool>,
}

impl CatalogEntry {
    pub fn validate(&self) -> Result<()> {
        if self.dim2n < 4 || !self.dim2n.is_multiple_of(2) {
            return Err(Error::InvalidInput(alloc::format!(
                "{}: dimension {} is not an even number at least 4",
                self.name,
                self.dim2n
            )));
        }
        if let Some((d, _)) = self.b_odd_first_nonzero {
            if d % 2 == 0 || d >= 2 * self.dim2n {
                return Err(Error::InvalidInput(alloc::format!(
                    "{}: degree {d} is not an odd degree below {}",
                    self.name,
                    2 * self.dim2n
                )));
            }
        }
        Ok(())
    }

    /// `b_d` for odd `d` when the entry determines it.
    pub fn odd_betti(&self, d: u32) -> Option<u64> {
        if d == 3 {
            if let Some(b3) = self.b3 {
                return Some(b3);
            }
        }
        match self.b_odd_first_nonzero {
            Some((first, value)) if first == d => Some(value),
            Some((first, _)) if first > d => Some(0),
            _ => None,
        }
    }

    /// Paper-attested generalized Kummer type fourfold.
    pub fn kummer_fourfold() -> Self {
        CatalogEntry {
            name: "generalized Kummer type, dimension 4".into(),
            dim2n: 4,
            b2: 7,
            b3: Some(8),
            b_odd_first_nonzero: Some((3, 8)),
            h_2n_minus_3_vanishes: Some(true),
        }
    }
}

pub fn default_catalog() -> Vec<CatalogEntry> {
    alloc::vec![CatalogEntry::kummer_fourfold()]
}

/// `b_3 >= 2^k` whenever `b_3 != 0`, with the divisible-by-four improvement.
pub fn audit_b3(entry: &CatalogEntry) -> Result<BoundResult> {
    let k = bound_exponent(entry.b2, true)?;
    let b3 = entry.odd_betti(3).ok_or(Error::MissingHypothesisData)?;
    Ok(BoundResult::compare(k, 3, b3))
}

/// `b_{2n-1} >= 2^k` when `H^{2n-3} = 0` and `H^{2n-1} != 0`. In dimension
/// four this is the `b_3` bound.
pub fn audit_b2n_minus_1(entry: &CatalogEntry) -> Result<BoundResult> {
    if entry.dim2n == 4 {
        return audit_b3(entry);
    }
    let k = bound_exponent(entry.b2, true)?;
    let degree = entry.dim2n - 1;
    match entry.h_2n_minus_3_vanishes {
        None => Err(Error::MissingHypothesisData),
        Some(false) => Ok(BoundResult {
            k,
            bound: 1u128 << k,
            status: BoundStatus::Vacuous,
            degree,
        }),
        Some(true) => {
            let b = entry.odd_betti(degree).ok_or(Error::MissingHypothesisData)?;
            Ok(BoundResult::compare(k, degree, b))
        }
    }
}

/// For sixfolds, the first nonzero odd Betti number is at least `2^k`: it is
/// `b_3`, or `b_5` when `H^3 = 0`.
pub fn audit_sixfold_odd(entry: &CatalogEntry) -> Result<BoundResult> {
    if entry.dim2n != 6 {
        return Err(Error::NotApplicable);
    }
    let b3 = entry.odd_betti(3).ok_or(Error::MissingHypothesisData)?;
    if b3 != 0 {
        return audit_b3(entry);
    }
    let with_flag = CatalogEntry {
        h_2n_minus_3_vanishes: Some(true),
        ..entry.clone()
    };
    audit_b2n_minus_1(&with_flag)
}

/// Possible complex dimensions of a simple factor of the Kuga-Satake torus.
pub fn ks_factor_dims(h: u32) -> Result<Vec<u128>> {
    if h < 3 {
        return Err(Error::TooSmall(h));
    }
    if h > 2 * MAX_EXPONENT {
        return Err(Error::OutOfRange(u64::from(h)));
    }
    let mut dims: Vec<u128> = if h % 2 == 1 {
        alloc::vec![1 << ((h - 3) / 2), 1 << ((h - 1) / 2)]
    } else {
        alloc::vec![1 << (h / 2), 1 << (h / 2 - 1), 1 << (h / 2 - 2)]
    };
    dims.sort_unstable();
    Ok(dims)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(dim2n: u32, b2: u64, b3: Option<u64>) -> CatalogEntry {
        CatalogEntry {
            name: "test".into(),
            dim2n,
            b2,
            b3,
            b_odd_first_nonzero: None,
            h_2n_minus_3_vanishes: None,
        }
    }

    #[test]
    fn exponents() {
        assert_eq!(bound_exponent(7, false), Ok(3));
        assert_eq!(bound_exponent(6, false), Ok(2));
        assert_eq!(bound_exponent(8, false), Ok(3));
        assert_eq!(bound_exponent(8, true), Ok(4));
        assert_eq!(bound_exponent(6, true), Ok(2));
        assert_eq!(bound_exponent(2, false), Err(Error::TooSmall(2)));
        assert_eq!(bound_exponent(255, false), Ok(127));
        assert_eq!(bound_exponent(256, true), Err(Error::OutOfRange(256)));
    }

    #[test]
    fn kummer_is_tight() {
        let r = audit_b3(&CatalogEntry::kummer_fourfold()).unwrap();
        assert_eq!((r.k, r.bound, r.status), (3, 8, BoundStatus::Tight));
        assert_eq!(audit_b2n_minus_1(&CatalogEntry::kummer_fourfold()).unwrap(), r);
    }

    #[test]
    fn statuses() {
        assert_eq!(audit_b3(&entry(4, 7, Some(4))).unwrap().status, BoundStatus::Fail);
        assert_eq!(audit_b3(&entry(4, 7, Some(0))).unwrap().status, BoundStatus::Vacuous);
        assert_eq!(audit_b3(&entry(4, 7, Some(20))).unwrap().status, BoundStatus::Pass);
        assert_eq!(audit_b3(&entry(4, 7, None)).err(), Some(Error::MissingHypothesisData));
    }

    #[test]
    fn top_odd_degree() {
        let mut e = entry(6, 8, Some(0));
        assert_eq!(audit_b2n_minus_1(&e).err(), Some(Error::MissingHypothesisData));
        e.h_2n_minus_3_vanishes = Some(true);
        e.b_odd_first_nonzero = Some((5, 16));
        let r = audit_b2n_minus_1(&e).unwrap();
        assert_eq!((r.bound, r.degree, r.status), (16, 5, BoundStatus::Tight));
        assert_eq!(audit_sixfold_odd(&e).unwrap(), r);
    }

    #[test]
    fn factor_dims() {
        assert_eq!(ks_factor_dims(7).unwrap(), vec![4, 8]);
        assert_eq!(ks_factor_dims(6).unwrap(), vec![2, 4, 8]);
        assert_eq!(ks_factor_dims(3).unwrap(), vec![1, 2]);
        assert_eq!(ks_factor_dims(2).err(), Some(Error::TooSmall(2)));
    }
}
