//! Degree specifications for approximants and the default family used for
//! ensembles: near-balanced degree vectors (pairwise difference at most 2),
//! inhomogeneous degree 0..=2, consuming at least 90% of the known prefix.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproximantSpec {
    pub order: usize,
    /// deg Q_0 ..= deg Q_M.
    pub q_degrees: Vec<usize>,
    /// deg P of the inhomogeneous polynomial.
    pub p_degree: usize,
}

impl ApproximantSpec {
    pub fn unknowns(&self) -> usize {
        self.q_degrees.iter().map(|d| d + 1).sum::<usize>() + self.p_degree + 1
    }

    /// Coefficients t^0..t^(used_terms-1) matched by this spec.
    pub fn used_terms(&self) -> usize {
        self.unknowns() - 1
    }

    pub fn balanced(order: usize, used_terms: usize, p_degree: usize, tilt: usize) -> Option<Self> {
        // distribute used_terms + 1 - (p_degree + 1) slots over M+1 polynomials
        let q_slots = (used_terms + 1).checked_sub(p_degree + 1)?;
        if q_slots < order + 1 {
            return None;
        }
        let base = q_slots / (order + 1);
        let extra = q_slots % (order + 1);
        let mut q_degrees = vec![base - 1; order + 1];
        for i in 0..extra {
            // tilt rotates which polynomials receive the leftover slot
            let at = (i + tilt) % (order + 1);
            q_degrees[at] += 1;
        }
        Some(ApproximantSpec {
            order,
            q_degrees,
            p_degree,
        })
    }
}

/// The default ensemble family for one order: vary the matched-prefix length
/// over the top 10% of what is available, the inhomogeneous degree over
/// 0..=2, and the placement of leftover degree slots. Deterministic, and
/// thinned to at most `max_specs` members evenly across the family.
pub fn default_family(order: usize, available: usize, max_specs: usize) -> Vec<ApproximantSpec> {
    let mut family = Vec::new();
    let lo = (available * 9).div_ceil(10);
    for used in (lo..=available).rev() {
        for p_degree in 0..=2usize {
            for tilt in 0..=1usize {
                if let Some(spec) = ApproximantSpec::balanced(order, used, p_degree, tilt) {
                    if spec.q_degrees.iter().all(|&d| d >= 2) && !family.contains(&spec) {
                        family.push(spec);
                    }
                }
            }
        }
    }
    thin(family, max_specs)
}

fn thin<T>(items: Vec<T>, max: usize) -> Vec<T> {
    if max == 0 || items.len() <= max {
        return items;
    }
    let n = items.len();
    let mut keep: Vec<usize> = (0..max).map(|i| i * (n - 1) / (max - 1)).collect();
    keep.dedup();
    let keep_set: std::collections::BTreeSet<usize> = keep.into_iter().collect();
    items
        .into_iter()
        .enumerate()
        .filter(|(i, _)| keep_set.contains(i))
        .map(|(_, v)| v)
        .collect()
}
