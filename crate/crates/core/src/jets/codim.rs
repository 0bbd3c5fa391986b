use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::TypeVector;
use crate::error::Error;

/// `s(a) = Σ (a_i − i)`.
pub fn schubert_number(a: &TypeVector) -> u32 {
    a.as_slice().iter().enumerate().map(|(i, &v)| v - (i as u32 + 1)).sum()
}

/// Codimension for adapted framings: `s(a) − (a₁ − 1)`.
pub fn codim_adapted(a: &TypeVector) -> u32 {
    schubert_number(a) - (a.as_slice()[0] - 1)
}

/// Codimension for osculating framings: `a_{n+1} − (n + 1)`.
pub fn codim_osculating(a: &TypeVector) -> u32 {
    a.last() - (a.n() as u32 + 1)
}

/// `a* = (a_{n+1} − a_n, …, a_{n+1} − a₁, a_{n+1})`.
pub fn dual_type(a: &TypeVector) -> TypeVector {
    let s = a.as_slice();
    let top = a.last();
    let mut d: Vec<u32> = s[..s.len() - 1].iter().rev().map(|&v| top - v).collect();
    d.push(top);
    TypeVector::new(d).expect("dual of a valid type is valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnumMode {
    /// Unconstrained curves: the Schubert number.
    Ordinary,
    Adapted,
    Osculating,
}

impl EnumMode {
    pub fn codim(self, a: &TypeVector) -> u32 {
        match self {
            EnumMode::Ordinary => schubert_number(a),
            EnumMode::Adapted => codim_adapted(a),
            EnumMode::Osculating => codim_osculating(a),
        }
    }
}

impl fmt::Display for EnumMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnumMode::Ordinary => "ordinary",
            EnumMode::Adapted => "adapted",
            EnumMode::Osculating => "osculating",
        })
    }
}

impl FromStr for EnumMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "ordinary" => Ok(EnumMode::Ordinary),
            "adapted" => Ok(EnumMode::Adapted),
            "osculating" => Ok(EnumMode::Osculating),
            other => Err(Error::Config(format!("unknown mode {other:?}"))),
        }
    }
}

/// All types of length `n + 1` whose codimension in `mode` is at most
/// `budget`, ordered by codimension and then lexicographically.
pub fn enumerate_generic_types(n: usize, budget: u32, mode: EnumMode) -> Vec<TypeVector> {
    // Every mode's codimension is at least a_{n+1} − (n+1).
    let top = n as u32 + 1 + budget;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n + 1);
    fill(&mut cur, n + 1, 1, top, &mut |a| {
        let t = TypeVector::new(a.to_vec()).expect("increasing by construction");
        if mode.codim(&t) <= budget {
            out.push(t);
        }
    });
    out.sort_by_key(|t| (mode.codim(t), t.clone()));
    out
}

fn fill(cur: &mut Vec<u32>, len: usize, from: u32, top: u32, emit: &mut dyn FnMut(&[u32])) {
    if cur.len() == len {
        emit(cur);
        return;
    }
    let remaining = (len - cur.len()) as u32;
    for v in from..=top + 1 - remaining {
        cur.push(v);
        fill(cur, len, v + 1, top, emit);
        cur.pop();
    }
}

/// CSV table with columns `type,schubert,codim_D,codim_C,dual_type`.
pub fn enumeration_csv(types: &[TypeVector]) -> String {
    let mut s = String::from("type,schubert,codim_D,codim_C,dual_type\n");
    for a in types {
        s.push_str(&format!(
            "\"{}\",{},{},{},\"{}\"\n",
            a,
            schubert_number(a),
            codim_adapted(a),
            codim_osculating(a),
            dual_type(a)
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(a: &[u32]) -> TypeVector {
        TypeVector::new(a.to_vec()).unwrap()
    }

    #[test]
    fn formulas() {
        assert_eq!(schubert_number(&tv(&[1, 2, 3])), 0);
        assert_eq!(schubert_number(&tv(&[2, 3, 4])), 3);
        assert_eq!(schubert_number(&tv(&[1, 2, 4])), 1);
        assert_eq!(codim_adapted(&tv(&[1, 2, 4])), 1);
        assert_eq!(codim_adapted(&tv(&[2, 3, 4])), 2);
        assert_eq!(codim_adapted(&tv(&[1, 2, 3])), 0);
        assert_eq!(codim_osculating(&tv(&[1, 3, 5])), 2);
        assert_eq!(codim_osculating(&tv(&[3, 4, 5])), 2);
        assert_eq!(codim_osculating(&tv(&[1, 2, 3])), 0);
        assert_eq!(dual_type(&tv(&[1, 2, 4])), tv(&[2, 3, 4]));
        assert_eq!(dual_type(&tv(&[1, 2, 5])), tv(&[3, 4, 5]));
        assert_eq!(dual_type(&tv(&[1, 2, 3])), tv(&[1, 2, 3]));
    }

    #[test]
    fn enumeration_lists() {
        let show = |v: Vec<TypeVector>| v.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(";");
        assert_eq!(show(enumerate_generic_types(2, 1, EnumMode::Ordinary)), "(1,2,3);(1,2,4)");
        assert_eq!(
            show(enumerate_generic_types(2, 2, EnumMode::Adapted)),
            "(1,2,3);(1,2,4);(1,2,5);(1,3,4);(2,3,4)"
        );
        assert_eq!(
            show(enumerate_generic_types(2, 2, EnumMode::Osculating)),
            "(1,2,3);(1,2,4);(1,3,4);(2,3,4);(1,2,5);(1,3,5);(1,4,5);(2,3,5);(2,4,5);(3,4,5)"
        );
    }

    #[test]
    fn csv_rows() {
        let csv = enumeration_csv(&enumerate_generic_types(2, 2, EnumMode::Adapted));
        let last = csv.lines().last().unwrap();
        assert_eq!(last, "\"(2,3,4)\",3,2,1,\"(1,2,4)\"");
    }
}
