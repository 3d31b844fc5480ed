//! West's pattern characterisation of 2-stack-sortable permutations: avoid
//! 2341, and avoid every 3241 that is not part of a 35241.

use crate::perm::Permutation;
use crate::{OracleError, Result};

const WEST_CAP: usize = 12;

pub fn west_check(p: &Permutation) -> Result<bool> {
    if p.len() > WEST_CAP {
        return Err(OracleError::Cap(format!(
            "pattern scan capped at length {WEST_CAP}"
        )));
    }
    let e = p.standardise();
    let v = e.entries();
    let n = v.len();

    // any 2341 occurrence disqualifies: v[l] < v[i] < v[j] < v[k]
    for i in 0..n {
        for j in i + 1..n {
            if v[j] <= v[i] {
                continue;
            }
            for k in j + 1..n {
                if v[k] <= v[j] {
                    continue;
                }
                for l in k + 1..n {
                    if v[l] < v[i] {
                        return Ok(false);
                    }
                }
            }
        }
    }

    // a 3241 occurrence (i,j,k,l): v[l] < v[j] < v[i] < v[k]; it is excused
    // only when some m between i and j has v[m] > v[k] (completing 35241)
    for i in 0..n {
        for j in i + 1..n {
            if v[j] >= v[i] {
                continue;
            }
            for k in j + 1..n {
                if v[k] <= v[i] {
                    continue;
                }
                for l in k + 1..n {
                    if v[l] >= v[j] {
                        continue;
                    }
                    let sheltered = (i + 1..j).any(|m| v[m] > v[k]);
                    if !sheltered {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
