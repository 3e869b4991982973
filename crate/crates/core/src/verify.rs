//! Invariant suite run over a corpus of trees.
//!
//! Each check is evaluated in exact arithmetic against an injectable analyzer
//! so the harness itself can be tested with a deliberately broken engine.
//! For every failing check the smallest failing tree is kept as the
//! counterexample.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::brute;
use crate::families;
use crate::par::Exec;
use crate::profile;
use crate::subtree::{analyze_rooted, count_containing_pair, BigRatio, SubtreeStats};
use crate::tree::Tree;

/// Exact statistics of a tree with the DP oriented at the given root.
pub type Analyzer = dyn Fn(&Tree, usize) -> SubtreeStats + Sync;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    /// Number of random trees.
    pub trees: usize,
    /// Random tree sizes cycle through `1..=max_n`.
    pub max_n: usize,
    pub seed: u64,
    /// Largest tree compared against exhaustive enumeration.
    pub oracle_cap: usize,
    /// Also check paths, combs, stars and spiders up to this size.
    pub families_up_to: usize,
    pub exec: Exec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { trees: 200, max_n: 12, seed: 1, oracle_cap: 12, families_up_to: 50, exec: Exec::default() }
    }
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub check: &'static str,
    pub detail: String,
    pub tree: Tree,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub trees: usize,
    /// Check name to number of trees it was evaluated on.
    pub evaluated: BTreeMap<&'static str, usize>,
    /// Smallest counterexample per failing check.
    pub failures: Vec<Violation>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Seeded random trees, sizes `1, 2, ..., max_n, 1, 2, ...`.
pub fn random_corpus(trees: usize, max_n: usize, seed: u64) -> Vec<Tree> {
    (0..trees).map(|i| families::random_tree(1 + i % max_n.max(1), seed.wrapping_add(i as u64)).unwrap()).collect()
}

/// Deterministic family members up to `limit` vertices.
pub fn family_corpus(limit: usize) -> Vec<Tree> {
    let mut out = Vec::new();
    for n in 1..=limit {
        out.push(families::path(n).unwrap());
        out.push(families::star(n).unwrap());
        if 2 * n <= limit {
            out.push(families::comb(n).unwrap());
        }
    }
    for legs in 3..=5 {
        for len in 1..=limit / legs {
            out.push(families::spider(legs, len).unwrap());
        }
    }
    out
}

pub fn run(config: &VerifyConfig) -> Report {
    run_with(config, &|t: &Tree, root: usize| analyze_rooted(t, root))
}

pub fn run_with(config: &VerifyConfig, analyzer: &Analyzer) -> Report {
    let mut corpus = random_corpus(config.trees, config.max_n, config.seed);
    corpus.extend(family_corpus(config.families_up_to));
    check_corpus(&corpus, config.oracle_cap, config.exec, analyzer)
}

pub fn check_corpus(corpus: &[Tree], oracle_cap: usize, exec: Exec, analyzer: &Analyzer) -> Report {
    let results = exec.map(corpus, |t| check_tree(t, oracle_cap, analyzer));
    let mut report = Report { trees: corpus.len(), ..Report::default() };
    let mut worst: BTreeMap<&'static str, Violation> = BTreeMap::new();
    for (t, outcome) in corpus.iter().zip(results) {
        for name in outcome.evaluated {
            *report.evaluated.entry(name).or_insert(0) += 1;
        }
        for (check, detail) in outcome.failures {
            let smaller = worst.get(check).is_none_or(|v| t.len() < v.tree.len());
            if smaller {
                worst.insert(check, Violation { check, detail, tree: t.clone() });
            }
        }
    }
    report.failures = worst.into_values().collect();
    report
}

#[derive(Default)]
pub struct TreeOutcome {
    pub evaluated: Vec<&'static str>,
    pub failures: Vec<(&'static str, String)>,
}

impl TreeOutcome {
    fn check(&mut self, name: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        self.evaluated.push(name);
        if !ok {
            self.failures.push((name, detail()));
        }
    }
}

fn ratio(a: &BigUint, b: &BigUint) -> BigRatio {
    BigRatio::new(a.clone(), b.clone())
}

fn abs_diff(a: &BigRatio, b: &BigRatio) -> BigRatio {
    if a > b {
        a - b
    } else {
        b - a
    }
}

/// Runs every applicable check on one tree.
pub fn check_tree(t: &Tree, oracle_cap: usize, analyzer: &Analyzer) -> TreeOutcome {
    let mut out = TreeOutcome::default();
    let n = t.len();
    let s = analyzer(t, 0);
    let nb = BigUint::from(n);

    if n <= oracle_cap {
        match brute::oracle_stats(t) {
            Ok(o) => {
                let n_all: Vec<BigUint> = o.n_all.iter().map(|&x| x.into()).collect();
                let m: Vec<Option<BigUint>> = o.m.iter().map(|x| x.map(Into::into)).collect();
                out.check("oracle total count", s.total_n == o.total_n.into(), || {
                    format!("dp {} vs enumeration {}", s.total_n, o.total_n)
                });
                out.check("oracle total size", s.total_r == o.total_r.into(), || {
                    format!("dp {} vs enumeration {}", s.total_r, o.total_r)
                });
                out.check("oracle vertex counts", s.n_all == n_all, || {
                    format!("dp {:?} vs enumeration {:?}", s.n_all, o.n_all)
                });
                out.check("oracle M values", s.m == m, || format!("dp {:?} vs enumeration {:?}", s.m, o.m));
                out.check("oracle cores", s.cores == o.cores, || {
                    format!("dp {:?} vs enumeration {:?}", s.cores, o.cores)
                });
            }
            Err(e) => out.failures.push(("oracle", e.to_string())),
        }
    }

    // Orientation of the DP must not matter.
    let other = analyzer(t, n - 1);
    out.check(
        "reroot invariance",
        other.n_all == s.n_all && other.m == s.m && other.total_n == s.total_n && other.cores == s.cores,
        || "statistics differ between roots 0 and n-1".into(),
    );

    // Total size recomputed from subtrees counted at their top vertex: the
    // size sum over subtrees topped at v is down[v] plus, for each child c,
    // the size sum topped at c times the ways to complete at v.
    let mut topped = vec![BigUint::zero(); n];
    for &v in s.order.iter().rev() {
        let mut acc = s.down[v].clone();
        for &c in t.neighbors(v) {
            if c != s.parent[v] {
                let (others, rem) = s.down[v].div_rem(&(&s.down[c] + 1u32));
                debug_assert!(rem.is_zero());
                acc += &topped[c] * others;
            }
        }
        topped[v] = acc;
    }
    let total_r: BigUint = topped.iter().sum();
    let sum_nall: BigUint = s.n_all.iter().sum();
    out.check("total size", total_r == s.total_r && sum_nall == s.total_r, || {
        format!("sum over tops {total_r}, sum of N(T,v) {sum_nall}, reported {}", s.total_r)
    });

    let p_sum = (0..n).fold(BigRatio::zero(), |acc, v| acc + ratio(&s.n_all[v], &s.total_n));
    out.check("mean order", p_sum == ratio(&s.total_r, &s.total_n), || {
        format!("sum of p is {p_sum}, R/N is {}/{}", s.total_r, s.total_n)
    });

    // (1 + N(T,v)) prod_w N_v(T,w) = prod_w (1 + N_v(T,w)).
    let mut log_sum_ok = true;
    for v in 0..n {
        let r = analyzer(t, v);
        let lhs: BigUint = (&r.down[v] + 1u32) * r.down.iter().product::<BigUint>();
        let rhs: BigUint = r.down.iter().map(|d| d + 1u32).product();
        if lhs != rhs {
            log_sum_ok = false;
            break;
        }
    }
    out.check("log-sum identity", log_sum_ok, || "product identity fails for some root".into());

    let c = s.cores[0];
    let h = BigUint::from(n / 2);
    let nc = &s.n_all[c];
    out.check(
        "core count bounds",
        BigUint::from(2u32) * (nc + 1u32) >= s.total_n
            && *nc < BigUint::from(2u32) * &s.total_n
            && nc * (BigUint::from(2u32) * &h + 1u32) >= &s.total_n * (&h + 1u32),
        || format!("N = {}, N(T,c) = {nc}", s.total_n),
    );

    // N prod M <= 4 prod (M + 1) and prod (M + 1) <= 4 N prod M over finite M.
    let finite: Vec<&BigUint> = s.m.iter().flatten().collect();
    let prod_m: BigUint = finite.iter().copied().product();
    let prod_m1: BigUint = finite.iter().map(|&x| x + 1u32).product();
    out.check(
        "entropy sandwich",
        &s.total_n * &prod_m <= &prod_m1 * 4u32 && prod_m1 <= &s.total_n * &prod_m * 4u32,
        || format!("N = {}", s.total_n),
    );

    for &core in &s.cores {
        let r = analyzer(t, core);
        let bad = (0..n).find(|&v| v != core && s.m[v].as_ref() != Some(&r.down[v]));
        out.check("core branch counts", bad.is_none(), || {
            let v = bad.unwrap();
            format!("vertex {v}: M = {:?}, count away from core {core} = {}", s.m[v], r.down[v])
        });
    }

    // q(v) = (# subtrees containing v and its core) / N(T, core).
    let mut chain_bad = None;
    for v in 0..n {
        let core = s.core_for(v);
        let pair = count_containing_pair(t, v, core).unwrap();
        let cond = ratio(&pair, &s.n_all[core]);
        let q = s.q_prob(v, None);
        if cond != q {
            chain_bad = Some(format!("vertex {v}: product {q}, conditional {cond}"));
            break;
        }
    }
    out.check("q chain rule", chain_bad.is_none(), || chain_bad.clone().unwrap());

    // q_i* <= q_{i+1}* <= 1: M does not decrease towards the core.
    let mono_bad = (0..n).find(|&v| {
        let path = s.path_to_core(v);
        path.len() > 2 && path[..path.len() - 1].windows(2).any(|w| s.m[w[0]] > s.m[w[1]])
    });
    out.check("q factor monotonicity", mono_bad.is_none(), || format!("vertex {}", mono_bad.unwrap()));

    // |p - q| <= n 2^(-L/2), squared: |p - q|^2 2^L <= n^2.
    let leaves = t.leaves().len();
    let scale = BigRatio::from_integer(BigUint::one() << leaves);
    let bound = BigRatio::from_integer(&nb * &nb);
    let gap_bad = (0..n).find(|&v| {
        let d = abs_diff(&s.p_prob(v), &s.q_prob(v, None));
        &d * &d * &scale > bound
    });
    out.check("p-q gap", gap_bad.is_none(), || format!("vertex {}", gap_bad.unwrap()));

    let mut path_balls: Vec<Option<usize>> = vec![None; n + 1];
    for m in 1..=n {
        let good = profile::is_m_good(t, m, None).unwrap();
        if good {
            out.check("leaf bound", 4 * m * leaves >= n, || format!("m = {m}, {leaves} leaves"));
        } else {
            // Path-ball count for every r with 2r - 1 < m.
            for r in (1..).take_while(|&r| 2 * r - 1 < m) {
                let count = *path_balls[r].get_or_insert_with(|| profile::path_ball_count(t, r));
                out.check("path-ball bound", 2 * m * count >= (m - 2 * (r - 1)) * n, || {
                    format!("m = {m}, r = {r}: {count} centred path balls")
                });
            }
        }
    }
    out
}

/// Edge-list rendering of a counterexample.
pub fn describe(v: &Violation) -> String {
    format!("check '{}' failed: {}\n{}", v.check, v.detail, v.tree.serialize())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config() -> VerifyConfig {
        VerifyConfig { trees: 40, max_n: 10, seed: 3, oracle_cap: 10, families_up_to: 12, exec: Exec::Sequential }
    }

    #[test]
    fn suite_passes_on_the_real_engine() {
        let report = run(&small_config());
        assert!(report.passed(), "{:?}", report.failures.iter().map(describe).collect::<Vec<_>>());
        assert!(report.evaluated["oracle total count"] > 40);
        assert!(report.evaluated["path-ball bound"] > 0);
    }

    #[test]
    fn corrupted_engine_is_caught_with_a_minimal_tree() {
        let corrupt = |t: &Tree, root: usize| {
            let mut s = analyze_rooted(t, root);
            if t.len() >= 5 {
                s.n_all[0] += 1u32;
            }
            s
        };
        let report = run_with(&small_config(), &corrupt);
        assert!(!report.passed());
        let v = report.failures.iter().find(|v| v.check == "oracle vertex counts").unwrap();
        assert_eq!(v.tree.len(), 5);
        assert!(describe(v).contains("\n5\n"));
    }

    #[test]
    fn corpora_are_deterministic() {
        assert_eq!(random_corpus(10, 6, 9), random_corpus(10, 6, 9));
        assert_eq!(random_corpus(7, 3, 0).iter().map(Tree::len).collect::<Vec<_>>(), vec![1, 2, 3, 1, 2, 3, 1]);
    }
}
