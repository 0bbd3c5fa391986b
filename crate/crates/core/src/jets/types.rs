use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Strictly increasing orders `(a₁, …, a_{n+1})` at which the jet matrix of a
/// curve gains rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct TypeVector(Vec<u32>);

impl TypeVector {
    pub fn new(a: Vec<u32>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::InvalidType(format!("need at least two entries, got {}", a.len())));
        }
        if a[0] < 1 {
            return Err(Error::InvalidType("entries must be at least 1".into()));
        }
        if a.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidType(format!("{a:?} is not strictly increasing")));
        }
        Ok(Self(a))
    }

    /// The ordinary type `(1, 2, …, n+1)`.
    pub fn ordinary(n: usize) -> Self {
        Self((1..=n as u32 + 1).collect())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Intrinsic dimension `n` (the vector has `n + 1` entries).
    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn last(&self) -> u32 {
        *self.0.last().expect("type vectors are non-empty")
    }

    pub fn is_ordinary(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &a)| a == i as u32 + 1)
    }

    /// Comma-separated form used in CSV columns and on the command line.
    pub fn to_csv(&self) -> String {
        self.0.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_csv())
    }
}

impl FromStr for TypeVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('(').trim_end_matches(')');
        let a = trimmed
            .split(',')
            .map(|p| p.trim().parse::<u32>().map_err(|e| Error::InvalidType(format!("{s}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(a)
    }
}

impl TryFrom<Vec<u32>> for TypeVector {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<TypeVector> for Vec<u32> {
    fn from(t: TypeVector) -> Self {
        t.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(TypeVector::new(vec![1, 2, 3]).is_ok());
        assert!(TypeVector::new(vec![1, 1, 3]).is_err());
        assert!(TypeVector::new(vec![0, 1, 3]).is_err());
        assert!(TypeVector::new(vec![3]).is_err());
        assert_eq!("(2, 3,4)".parse::<TypeVector>().unwrap().as_slice(), &[2, 3, 4]);
        assert_eq!(TypeVector::ordinary(2).to_string(), "(1,2,3)");
        assert!(TypeVector::ordinary(3).is_ordinary());
    }
}
