use std::fmt::Write;

/// One stage of a construction: its predicted depth contribution and, for
/// built circuits, the contribution measured on the emitted DAG.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LedgerStage {
    pub label: String,
    pub predicted: u64,
    pub measured: Option<u64>,
}

/// Per-stage depth accounting for a construction.
#[derive(Clone, Debug, PartialEq)]
pub struct DepthLedger {
    pub stages: Vec<LedgerStage>,
    pub total_predicted: u64,
    /// `None` for prediction-only ledgers.
    pub total_measured: Option<u64>,
    /// Total depth minus the leading-order term of the construction (for
    /// example `log2 m + log2 n * log2 d + d(inner)` for one composition):
    /// the additive slack that the asymptotic analysis treats as `O(log n)`.
    pub overhead: f64,
}

impl DepthLedger {
    pub fn new() -> Self {
        Self {
            stages: Vec::new(),
            total_predicted: 0,
            total_measured: None,
            overhead: 0.0,
        }
    }

    pub fn push(&mut self, label: impl Into<String>, predicted: u64, measured: Option<u64>) {
        self.total_predicted += predicted;
        if let Some(m) = measured {
            *self.total_measured.get_or_insert(0) += m;
        }
        self.stages.push(LedgerStage {
            label: label.into(),
            predicted,
            measured,
        });
    }

    pub fn append(&mut self, other: DepthLedger) {
        for s in other.stages {
            self.push(s.label, s.predicted, s.measured);
        }
    }

    /// Records `overhead = total - leading_term`, using the measured total
    /// when present.
    pub fn set_leading_term(&mut self, leading_term: f64) {
        let total = self.total_measured.unwrap_or(self.total_predicted);
        self.overhead = total as f64 - leading_term;
    }

    /// CSV with columns `stage,label,predicted,measured` and a final `total`
    /// row. `header` lines are emitted first as `# ` comments.
    pub fn to_csv(&self, header: &[String]) -> String {
        let mut out = String::new();
        for line in header {
            let _ = writeln!(out, "# {line}");
        }
        out.push_str("stage,label,predicted,measured\n");
        let fmt_measured = |m: Option<u64>| m.map(|v| v.to_string()).unwrap_or_default();
        for (idx, s) in self.stages.iter().enumerate() {
            let _ = writeln!(out, "{idx},{},{},{}", s.label, s.predicted, fmt_measured(s.measured));
        }
        let _ = writeln!(
            out,
            "total,total,{},{}",
            self.total_predicted,
            fmt_measured(self.total_measured)
        );
        out
    }
}

impl Default for DepthLedger {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn totals_and_csv() {
        let mut l = DepthLedger::new();
        l.push("closure", 20, Some(20));
        l.push("or", 5, Some(5));
        assert_eq!(l.total_predicted, 25);
        assert_eq!(l.total_measured, Some(25));
        l.set_leading_term(22.5);
        assert_eq!(l.overhead, 2.5);
        let csv = l.to_csv(&["tool x".to_string()]);
        assert_eq!(
            csv,
            "# tool x\nstage,label,predicted,measured\n0,closure,20,20\n1,or,5,5\ntotal,total,25,25\n"
        );
        let mut p = DepthLedger::new();
        p.push("squaring", 42, None);
        assert!(p.to_csv(&[]).ends_with("0,squaring,42,\ntotal,total,42,\n"));
    }
}
