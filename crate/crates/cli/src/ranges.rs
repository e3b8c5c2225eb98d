//! `--p` and `--t` value syntax.

use std::str::FromStr;

fn parse_u64(s: &str) -> Result<u64, String> {
    s.trim().parse().map_err(|_| format!("expected a non-negative integer, got {s:?}"))
}

fn parse_span(s: &str) -> Result<(u64, u64), String> {
    match s.split_once("..") {
        Some((a, b)) => {
            let b = b.strip_prefix('=').unwrap_or(b);
            let (lo, hi) = (parse_u64(a)?, parse_u64(b)?);
            if lo > hi {
                return Err(format!("empty range {s:?}"));
            }
            Ok((lo, hi))
        }
        None => parse_u64(s).map(|x| (x, x)),
    }
}

/// A single value `p` or an inclusive range `a..b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeRange {
    pub lo: u64,
    pub hi: u64,
}

impl PrimeRange {
    pub fn is_single(&self) -> bool {
        self.lo == self.hi
    }
}

impl FromStr for PrimeRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        parse_span(s).map(|(lo, hi)| PrimeRange { lo, hi })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TSelection {
    All,
    Span(u64, u64),
}

impl TSelection {
    /// Residues selected in `1..p`.
    pub fn residues(&self, p: u64) -> Result<Vec<u64>, String> {
        let (lo, hi) = match *self {
            TSelection::All => (1, p.saturating_sub(1)),
            TSelection::Span(lo, hi) => (lo, hi),
        };
        if lo == 0 || hi >= p {
            return Err(format!("t must lie in 1..{}", p.saturating_sub(1)));
        }
        Ok((lo..=hi).collect())
    }

    pub fn is_single(&self) -> bool {
        matches!(self, TSelection::Span(a, b) if a == b)
    }
}

impl FromStr for TSelection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("all") {
            return Ok(TSelection::All);
        }
        parse_span(s).map(|(lo, hi)| TSelection::Span(lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses() {
        assert_eq!("463..600".parse::<PrimeRange>().unwrap(), PrimeRange { lo: 463, hi: 600 });
        assert_eq!("5..=7".parse::<PrimeRange>().unwrap(), PrimeRange { lo: 5, hi: 7 });
        assert!("7".parse::<PrimeRange>().unwrap().is_single());
        assert!("9..3".parse::<PrimeRange>().is_err());
        assert_eq!("ALL".parse::<TSelection>().unwrap(), TSelection::All);
        assert_eq!(TSelection::All.residues(5).unwrap(), vec![1, 2, 3, 4]);
        assert!("2..9".parse::<TSelection>().unwrap().residues(5).is_err());
        assert!("0".parse::<TSelection>().unwrap().residues(5).is_err());
    }
}
