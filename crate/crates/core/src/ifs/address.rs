use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ifs::IfsSystem;

/// Finite prefix `(i_1, ..., i_k)` of an infinite address, as indices into the digit list.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AddressWord {
    digits: Vec<u8>,
}

impl AddressWord {
    pub fn new(sys: &IfsSystem, digits: Vec<u8>) -> Result<Self> {
        let n = sys.digits().len();
        if let Some(&i) = digits.iter().find(|&&i| usize::from(i) >= n) {
            return Err(Error::InvalidArgument(format!("digit index {i} out of range 0..{n}")));
        }
        Ok(Self { digits })
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

/// Point of a truncated address and its distance bound to any infinite extension.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AddressPoint {
    pub point: Vec<f64>,
    /// `|M^-1|^k * radius`.
    pub error_bound: f64,
}

/// `sum_{j <= k} M^-j b_{i_j}`, evaluated as `tau_{i_1}(... tau_{i_k}(0))`.
pub fn address_point(sys: &IfsSystem, w: &AddressWord) -> Result<AddressPoint> {
    if w.is_empty() {
        return Err(Error::InvalidArgument("address word must be non-empty".into()));
    }
    let point = address_fold(sys, w.digits());
    let error_bound = sys.contraction().powi(w.len() as i32) * sys.radius();
    Ok(AddressPoint { point, error_bound })
}

pub(crate) fn address_fold(sys: &IfsSystem, digits: &[u8]) -> Vec<f64> {
    let mut x = vec![0.0; sys.dim()];
    let mut y = vec![0.0; sys.dim()];
    for &i in digits.iter().rev() {
        sys.tau_into(usize::from(i), &x, &mut y);
        std::mem::swap(&mut x, &mut y);
    }
    x
}
