use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use super::{analyze, LogBase, SubtreeStats};
use crate::error::TreeError;
use crate::tree::Tree;

/// Exact nonnegative rational with big-integer parts, always reduced.
pub type BigRatio = Ratio<BigUint>;

/// Natural log of a positive big integer from its bit length and top 64 bits.
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().unwrap() as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().unwrap();
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln1p_recip(m: &BigUint) -> f64 {
    // 1/m underflows to 0 for astronomically large m, which is the right limit.
    let mf = m.to_f64().unwrap_or(f64::INFINITY);
    (1.0 / mf).ln_1p()
}

impl SubtreeStats<BigUint> {
    /// `M(T, v)`; `None` is the infinite value at the singleton's vertex.
    pub fn m_value(&self, v: usize) -> Option<&BigUint> {
        self.m[v].as_ref()
    }

    /// `R(T)`, the total number of vertices over all subtrees.
    pub fn total_size(&self) -> &BigUint {
        &self.total_r
    }

    /// Mean subtree order `R / N`.
    pub fn mean_order(&self) -> BigRatio {
        BigRatio::new(self.total_r.clone(), self.total_n.clone())
    }

    /// Subtree density `R / (N n)`.
    pub fn density(&self) -> BigRatio {
        BigRatio::new(self.total_r.clone(), &self.total_n * BigUint::from(self.len()))
    }

    pub fn ln_total_n(&self) -> f64 {
        ln_big(&self.total_n)
    }

    /// `log N(T) / n`.
    pub fn entropy(&self, base: LogBase) -> f64 {
        base.convert_from_ln(self.ln_total_n()) / self.len() as f64
    }

    /// `ln(1 + 1/M(T, w))`, zero where `M` is infinite.
    pub fn f_value(&self, w: usize) -> f64 {
        self.m[w].as_ref().map_or(0.0, ln1p_recip)
    }

    pub fn f_sum(&self) -> f64 {
        (0..self.len()).map(|w| self.f_value(w)).sum()
    }

    /// `(1/n) sum_w f(T, w)`.
    pub fn entropy_estimate(&self) -> f64 {
        self.f_sum() / self.len() as f64
    }

    /// Probability that a uniform random subtree contains `v`.
    pub fn p_prob(&self, v: usize) -> BigRatio {
        BigRatio::new(self.n_all[v].clone(), self.total_n.clone())
    }

    /// `M / (M + 1)` at `v`, or 1 where `M` is infinite.
    pub fn q_factor(&self, v: usize) -> BigRatio {
        match &self.m[v] {
            Some(m) => BigRatio::new(m.clone(), m + 1u32),
            None => BigRatio::one(),
        }
    }

    /// `q_i^*(T, v)`: the `i`-th chain-rule factor on the way to the core.
    pub fn q_star(&self, v: usize, i: usize) -> BigRatio {
        let path = self.path_to_core(v);
        if i + 1 < path.len() {
            self.q_factor(path[i])
        } else {
            BigRatio::one()
        }
    }

    /// Probability that a random subtree contains `v` given that it contains
    /// the nearer core. With `depth_cap = Some(K)` only the factors
    /// `q_0^* .. q_K^*` are multiplied.
    pub fn q_prob(&self, v: usize, depth_cap: Option<usize>) -> BigRatio {
        let path = self.path_to_core(v);
        let k = path.len() - 1;
        let take = depth_cap.map_or(k, |cap| k.min(cap + 1));
        path[..take].iter().fold(BigRatio::one(), |acc, &x| acc * self.q_factor(x))
    }

    /// `(1/n) sum_v q(T, v)`.
    pub fn q_density(&self, depth_cap: Option<usize>) -> BigRatio {
        let q: Vec<BigRatio> = match depth_cap {
            Some(cap) => (0..self.len()).map(|v| self.q_prob(v, Some(cap))).collect(),
            None => {
                let mut q = vec![BigRatio::one(); self.len()];
                for &v in &self.core_order {
                    let next = self.toward_core[v];
                    if next != super::NONE {
                        q[v] = &q[next] * self.q_factor(v);
                    }
                }
                q
            }
        };
        let sum = q.into_iter().fold(BigRatio::zero(), |a, b| a + b);
        sum / BigRatio::from_integer(BigUint::from(self.len()))
    }
}

fn checked(t: &Tree, v: usize) -> Result<SubtreeStats, TreeError> {
    t.check_vertex(v)?;
    Ok(analyze(t))
}

pub fn m_value(t: &Tree, v: usize) -> Result<Option<BigUint>, TreeError> {
    Ok(checked(t, v)?.m[v].clone())
}

pub fn subtree_core(t: &Tree) -> Vec<usize> {
    analyze(t).cores
}

pub fn total_size(t: &Tree) -> BigUint {
    analyze(t).total_r
}

pub fn mean_order(t: &Tree) -> BigRatio {
    analyze(t).mean_order()
}

pub fn density(t: &Tree) -> BigRatio {
    analyze(t).density()
}

pub fn entropy(t: &Tree, base: LogBase) -> f64 {
    analyze(t).entropy(base)
}

pub fn f_value(t: &Tree, w: usize) -> Result<f64, TreeError> {
    Ok(checked(t, w)?.f_value(w))
}

pub fn entropy_estimate(t: &Tree) -> f64 {
    analyze(t).entropy_estimate()
}

pub fn p_prob(t: &Tree, v: usize) -> Result<BigRatio, TreeError> {
    Ok(checked(t, v)?.p_prob(v))
}

pub fn q_star(t: &Tree, v: usize, i: usize) -> Result<BigRatio, TreeError> {
    Ok(checked(t, v)?.q_star(v, i))
}

pub fn q_prob(t: &Tree, v: usize, depth_cap: Option<usize>) -> Result<BigRatio, TreeError> {
    Ok(checked(t, v)?.q_prob(v, depth_cap))
}

/// Number of subtrees containing both `u` and `v`: the product, over the
/// vertices `w` of the `u`-`v` path, of `1 + (rooted count)` for every branch
/// at `w` off the path. Uses its own downward pass rooted at `u`.
pub fn count_containing_pair(t: &Tree, u: usize, v: usize) -> Result<BigUint, TreeError> {
    t.check_vertex(u)?;
    t.check_vertex(v)?;
    let (parent, order) = t.bfs_order(u);
    let mut down = vec![BigUint::one(); t.len()];
    for &x in order.iter().rev() {
        for &c in t.neighbors(x) {
            if c != parent[x] {
                let f = &down[c] + 1u32;
                down[x] *= f;
            }
        }
    }
    let path = t.path_between(v, u);
    let mut on_path = vec![false; t.len()];
    for &w in &path {
        on_path[w] = true;
    }
    let mut count = BigUint::one();
    for &w in &path {
        for &x in t.neighbors(w) {
            if !on_path[x] {
                count *= &down[x] + 1u32;
            }
        }
    }
    Ok(count)
}
