use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Order in which a window lists multi-indices of `N_0^d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Enumeration {
    /// By `n_1 + ... + n_d`, then lexicographically.
    Diagonal,
    /// By `max_i n_i`, then lexicographically.
    SquareShell,
    /// Lexicographic inside the smallest cube `{0..s}^d` holding `size` indices.
    Lexicographic,
    /// `0, 1, 2, ...`; one-dimensional only.
    #[serde(rename = "1d-natural")]
    Natural1d,
}

impl Enumeration {
    pub fn label(self) -> &'static str {
        match self {
            Self::Diagonal => "diagonal",
            Self::SquareShell => "square-shell",
            Self::Lexicographic => "lexicographic",
            Self::Natural1d => "1d-natural",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "diagonal" => Ok(Self::Diagonal),
            "square-shell" => Ok(Self::SquareShell),
            "lexicographic" => Ok(Self::Lexicographic),
            "1d-natural" => Ok(Self::Natural1d),
            other => Err(Error::InvalidArgument(format!("unknown enumeration {other:?}"))),
        }
    }

    /// The first `size` indices in this order.
    pub fn indices(self, dim: usize, size: usize) -> Result<Vec<Vec<i64>>> {
        if dim == 0 || size == 0 {
            return Err(Error::InvalidArgument("dimension and size must be positive".into()));
        }
        if self == Self::Natural1d {
            if dim != 1 {
                return Err(Error::InvalidArgument(format!("1d-natural enumeration in dimension {dim}")));
            }
            return Ok((0..size as i64).map(|n| vec![n]).collect());
        }
        // Smallest cube side holding `size` points; every order below only needs indices from
        // a cube of that side or, for the graded orders, of side `size`.
        let mut side = 1usize;
        while side.pow(dim as u32) < size {
            side += 1;
        }
        let side = match self {
            Self::Lexicographic | Self::SquareShell => side,
            _ => size,
        };
        let mut out = Vec::with_capacity(size);
        let mut grade = 0usize;
        while out.len() < size {
            let mut level: Vec<Vec<i64>> = Vec::new();
            match self {
                Self::Diagonal => compositions(dim, grade, &mut Vec::new(), &mut level),
                Self::SquareShell => {
                    cube(dim, grade + 1, &mut Vec::new(), &mut level);
                    level.retain(|n| n.iter().any(|&v| v as usize == grade));
                }
                Self::Lexicographic => {
                    cube(dim, side, &mut Vec::new(), &mut level);
                    grade = usize::MAX - 1;
                }
                Self::Natural1d => unreachable!(),
            }
            level.sort();
            out.extend(level.into_iter().take(size - out.len()));
            grade += 1;
            if grade > side * dim && out.len() < size {
                return Err(Error::InvalidArgument("enumeration ran out of indices".into()));
            }
        }
        Ok(out)
    }
}

fn compositions(dim: usize, total: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if prefix.len() + 1 == dim {
        prefix.push(total as i64);
        out.push(prefix.clone());
        prefix.pop();
        return;
    }
    for first in 0..=total {
        prefix.push(first as i64);
        compositions(dim, total - first, prefix, out);
        prefix.pop();
    }
}

fn cube(dim: usize, side: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if prefix.len() == dim {
        out.push(prefix.clone());
        return;
    }
    for v in 0..side {
        prefix.push(v as i64);
        cube(dim, side, prefix, out);
        prefix.pop();
    }
}
