//! Text formats for distributions and marginal families.
//!
//! Both are line based: `KEY VALUE`, with `#` starting a comment and blank
//! lines ignored. Values are exact rationals `num/den` or integers.
//!
//! Distribution keys are arrangements, `0,1,1` (box of each particle) for
//! maps and one-line permutations `2,1,3` for bijections. Arrangements that
//! are not listed carry zero mass. Family keys are `i=(1,3);j=(0,2)` and
//! every key of the system must be present.

use num_traits::Zero;

use super::{Distribution, MarginalFamily, RowKey, SignedMeasure, SystemSpec};
use crate::error::{Error, Result};
use crate::rational::{format_rat, parse_rat, Rat};

fn entries(text: &str) -> impl Iterator<Item = Result<(usize, String, Rat)>> + '_ {
    text.lines().enumerate().filter_map(|(no, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            return None;
        }
        let line_no = no + 1;
        Some(match line.rsplit_once(char::is_whitespace) {
            None => Err(Error::parse(line_no, "expected `KEY VALUE`")),
            Some((key, value)) => parse_rat(value)
                .map(|v| (line_no, key.trim().to_string(), v))
                .map_err(|e| Error::parse(line_no, e.to_string())),
        })
    })
}

pub fn parse_measure(s: &SystemSpec, text: &str) -> Result<SignedMeasure> {
    let mut values = vec![Rat::zero(); s.arrangement_count()];
    let mut seen = vec![false; values.len()];
    for entry in entries(text) {
        let (line, key, value) = entry?;
        let boxes = s.parse_arrangement_key(&key).map_err(|e| Error::parse(line, e.to_string()))?;
        let idx = s.arrangement_index(&boxes)?;
        if std::mem::replace(&mut seen[idx], true) {
            return Err(Error::parse(line, format!("arrangement {key} listed twice")));
        }
        values[idx] = value;
    }
    SignedMeasure::new(values)
}

pub fn parse_distribution(s: &SystemSpec, text: &str) -> Result<Distribution> {
    Distribution::new(parse_measure(s, text)?.values)
}

/// Lists the arrangements with nonzero mass.
pub fn format_measure(s: &SystemSpec, values: &[Rat]) -> String {
    let mut out = String::new();
    for (boxes, v) in s.arrangements().iter().zip(values) {
        if !v.is_zero() {
            out.push_str(&format!("{} {}\n", s.arrangement_key(boxes), format_rat(v)));
        }
    }
    out
}

pub fn parse_family(s: &SystemSpec, text: &str) -> Result<MarginalFamily> {
    let mut pairs = Vec::new();
    for entry in entries(text) {
        let (line, key, value) = entry?;
        let key: RowKey = key.parse().map_err(|e: Error| Error::parse(line, e.to_string()))?;
        pairs.push((key, value));
    }
    MarginalFamily::from_entries(*s, pairs)
}

pub fn format_family(fam: &MarginalFamily) -> String {
    fam.entries()
        .into_iter()
        .map(|(k, v)| format!("{k} {}\n", format_rat(&v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::particlebox::{restrict, Sigma};
    use crate::rational::rat;

    #[test]
    fn distribution_round_trip() {
        let s = SystemSpec::new(3, 3, 1, Sigma::Bij).unwrap();
        let text = "# two permutations\n2,1,3 1/3\n\n3,1,2 2/3  # trailing\n";
        let p = parse_distribution(&s, text).unwrap();
        assert_eq!(p.values[2], rat(1, 3));
        assert_eq!(p.values[4], rat(2, 3));
        assert_eq!(parse_distribution(&s, &format_measure(&s, &p.values)).unwrap(), p);
    }

    #[test]
    fn distribution_errors() {
        let s = SystemSpec::new(2, 2, 1, Sigma::All).unwrap();
        assert!(parse_distribution(&s, "0,0 1/2\n").is_err());
        assert!(parse_distribution(&s, "0,0 1/2\n0,0 1/2\n").is_err());
        assert!(parse_distribution(&s, "0,2 1\n").is_err());
        assert!(parse_distribution(&s, "0,0 3/2\n1,1 -1/2\n").is_err());
        assert!(parse_measure(&s, "0,0 3/2\n1,1 -1/2\n").is_ok());
        assert!(matches!(parse_distribution(&s, "0,0\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn family_round_trip() {
        let s = SystemSpec::new(3, 2, 2, Sigma::All).unwrap();
        let p = parse_distribution(&s, "0,1,1 1/4\n1,0,0 3/4\n").unwrap();
        let fam = restrict(&s, &p.as_signed()).unwrap();
        let text = format_family(&fam);
        assert!(text.lines().next().unwrap().starts_with("i=(1,2);j=(0,0) 0"));
        assert_eq!(parse_family(&s, &text).unwrap(), fam);
        let truncated: String = text.lines().skip(1).map(|l| format!("{l}\n")).collect();
        assert!(parse_family(&s, &truncated).is_err());
    }
}
