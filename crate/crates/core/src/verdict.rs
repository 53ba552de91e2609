use std::fmt;

/// Outcome of a mechanical check. Sampled verdicts are never upgraded to
/// exhaustive ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    VerifiedExhaustive,
    VerifiedSampled,
    DirectOnly,
    Inconclusive(String),
    Refuted(String),
    NotApplicable(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::VerifiedExhaustive => "verified_exhaustive",
            Verdict::VerifiedSampled => "verified_sampled",
            Verdict::DirectOnly => "direct_only",
            Verdict::Inconclusive(_) => "inconclusive",
            Verdict::Refuted(_) => "refuted",
            Verdict::NotApplicable(_) => "not_applicable",
        }
    }

    pub fn detail(&self) -> Option<&str> {
        match self {
            Verdict::Inconclusive(s) | Verdict::Refuted(s) | Verdict::NotApplicable(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::VerifiedExhaustive | Verdict::VerifiedSampled)
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    /// Conjunction of two verdicts: refutation wins, then inconclusive, then
    /// the weaker of the two verifications.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Refuted(s), _) | (_, Refuted(s)) => Refuted(s),
            (NotApplicable(s), _) | (_, NotApplicable(s)) => NotApplicable(s),
            (Inconclusive(s), _) | (_, Inconclusive(s)) => Inconclusive(s),
            (DirectOnly, _) | (_, DirectOnly) => DirectOnly,
            (VerifiedSampled, _) | (_, VerifiedSampled) => VerifiedSampled,
            (VerifiedExhaustive, VerifiedExhaustive) => VerifiedExhaustive,
        }
    }

    /// Process exit code: 0 verified, 1 refuted, 2 anything undecided.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::VerifiedExhaustive | Verdict::VerifiedSampled => 0,
            Verdict::Refuted(_) => 1,
            _ => 2,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.detail() {
            Some(d) => write!(f, "{} ({d})", self.name()),
            None => f.write_str(self.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjunction_order() {
        let r = Verdict::Refuted("x".into());
        assert_eq!(Verdict::VerifiedExhaustive.and(r.clone()), r);
        assert_eq!(Verdict::VerifiedExhaustive.and(Verdict::VerifiedSampled), Verdict::VerifiedSampled);
        assert_eq!(Verdict::Inconclusive("open".into()).and(Verdict::VerifiedSampled).name(), "inconclusive");
        assert_eq!(Verdict::DirectOnly.exit_code(), 2);
    }
}
