use super::{LogBase, LogCount, LogStats, NONE};

/// `ln(M / (M + 1))` from `ln M`.
fn ln_q_factor(ln_m: f64) -> f64 {
    -(-ln_m).exp().ln_1p()
}

impl LogStats {
    pub fn ln_total_n(&self) -> f64 {
        self.total_n.ln()
    }

    pub fn ln_total_r(&self) -> f64 {
        self.total_r.ln()
    }

    pub fn entropy(&self, base: LogBase) -> f64 {
        base.convert_from_ln(self.ln_total_n()) / self.len() as f64
    }

    /// `ln(1 + 1/M)` from the log-domain `M`; zero where `M` is infinite.
    pub fn f_value(&self, w: usize) -> f64 {
        self.m[w].map_or(0.0, |LogCount(ln_m)| (-ln_m).exp().ln_1p())
    }

    pub fn entropy_estimate(&self) -> f64 {
        (0..self.len()).map(|w| self.f_value(w)).sum::<f64>() / self.len() as f64
    }

    pub fn mean_order(&self) -> f64 {
        (self.ln_total_r() - self.ln_total_n()).exp()
    }

    pub fn density(&self) -> f64 {
        self.mean_order() / self.len() as f64
    }

    pub fn p_prob(&self, v: usize) -> f64 {
        (self.n_all[v].ln() - self.ln_total_n()).exp()
    }

    /// Per-vertex `ln q(T, v)`.
    pub fn ln_q(&self) -> Vec<f64> {
        let mut ln_q = vec![0.0; self.len()];
        for &v in &self.core_order {
            let next = self.toward_core[v];
            if next != NONE {
                let factor = self.m[v].map_or(0.0, |LogCount(ln_m)| ln_q_factor(ln_m));
                ln_q[v] = ln_q[next] + factor;
            }
        }
        ln_q
    }

    /// `(1/n) sum_v q(T, v)`.
    pub fn q_density(&self) -> f64 {
        self.ln_q().iter().map(|x| x.exp()).sum::<f64>() / self.len() as f64
    }
}
