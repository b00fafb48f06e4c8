use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::poly::Q;

/// A global term order on `k[x]^m`, realized as a lexicographically compared
/// integer key per term: optional component block, weight vectors, graded
/// reverse lexicographic monomial order, then lower component index first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermOrder {
    block: usize,
    weights: Vec<Vec<i64>>,
}

impl TermOrder {
    /// Grevlex on monomials, ties broken by component (term over position).
    pub fn grevlex() -> Self {
        TermOrder { block: 0, weights: Vec::new() }
    }

    /// Elimination order: terms in components `< block` dominate all others.
    pub fn elimination(block: usize) -> Self {
        TermOrder { block, weights: Vec::new() }
    }

    /// Order refined from integer weight vectors, compared before grevlex.
    pub fn weighted(weights: Vec<Vec<i64>>) -> Self {
        TermOrder { block: 0, weights }
    }

    /// Order on homogenized vectors over `k[t, x_1..x_n]` selecting, among terms
    /// of one total degree, those minimizing the pairing of the `x`-exponent with `w`.
    pub fn min_weight_homogeneous(w: &[Q]) -> Self {
        let scaled = integer_weights(w);
        let n = scaled.len();
        let degree = vec![1i64; n + 1];
        let mut neg = vec![0i64; n + 1];
        for (i, s) in scaled.iter().enumerate() {
            neg[i + 1] = -s;
        }
        TermOrder::weighted(vec![degree, neg])
    }

    pub fn key(&self, exp: &[i32], comp: usize) -> Vec<i64> {
        let mut k = Vec::with_capacity(exp.len() + self.weights.len() + 3);
        if self.block > 0 {
            k.push(i64::from(comp < self.block));
        }
        for w in &self.weights {
            k.push(w.iter().zip(exp).map(|(a, &b)| a * i64::from(b)).sum());
        }
        k.push(exp.iter().map(|&x| i64::from(x)).sum());
        k.extend(exp.iter().rev().map(|&x| -i64::from(x)));
        k.push(-(comp as i64));
        k
    }
}

/// Scales a rational weight vector to a primitive integer one on the same ray.
pub fn integer_weights(w: &[Q]) -> Vec<i64> {
    let l = w.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = w.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::from(0), |acc, x| acc.gcd(x));
    ints.iter()
        .map(|x| if g == BigInt::from(0) { x.clone() } else { x / &g })
        .map(|x| x.to_i64().expect("weight fits in 64 bits"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_prefers_x_over_y_and_degree() {
        let o = TermOrder::grevlex();
        assert!(o.key(&[2, 0], 0) > o.key(&[0, 2], 0));
        assert!(o.key(&[1, 1], 0) > o.key(&[0, 2], 0));
        assert!(o.key(&[0, 3], 0) > o.key(&[2, 0], 0));
        assert!(o.key(&[1, 0], 0) > o.key(&[1, 0], 1));
    }

    #[test]
    fn elimination_block_dominates() {
        let o = TermOrder::elimination(1);
        assert!(o.key(&[0, 0], 0) > o.key(&[5, 5], 1));
    }

    #[test]
    fn min_weight_order_selects_lightest_terms() {
        // variables (t, x, y); w = (1, 0): y^2 is lighter than x^2
        let o = TermOrder::min_weight_homogeneous(&[Q::from_integer(1.into()), Q::from_integer(0.into())]);
        assert!(o.key(&[0, 0, 2], 0) > o.key(&[0, 2, 0], 1));
    }
}
