use std::fmt;

use super::DslError;

/// How a pattern is used. `Select` patterns pick pivot sites or the sites a
/// mask keeps; `HalveHide` is the special `!*` form that keeps the lower half.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatternKind {
    Select,
    HalveHide,
}

/// A site-selection pattern over the alphabet `{0,1,*,!}`.
///
/// The body is a string of `0`/`1` with at most one `*`. At resolution the
/// `*` expands with `0` until the pattern has the requested length; a body
/// without `*` is tiled cyclically. A leading `!` inverts the selection, and
/// `!*` on its own is the halving mask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    source: String,
    negated: bool,
    prefix: Vec<bool>,
    suffix: Vec<bool>,
    star: bool,
    kind: PatternKind,
}

impl Pattern {
    pub fn parse(src: &str) -> Result<Self, DslError> {
        let malformed = |why: &str| DslError::MalformedPattern {
            src: src.to_string(),
            why: why.to_string(),
        };
        let (negated, body) = match src.strip_prefix('!') {
            Some(rest) => (true, rest),
            None => (false, src),
        };
        if body.is_empty() {
            return Err(malformed("empty body"));
        }
        let mut prefix = Vec::new();
        let mut suffix = Vec::new();
        let mut star = false;
        for ch in body.chars() {
            let bit = match ch {
                '0' => false,
                '1' => true,
                '*' if star => return Err(malformed("more than one '*'")),
                '*' => {
                    star = true;
                    continue;
                }
                '!' => return Err(malformed("'!' is only allowed as the first character")),
                other => return Err(malformed(&format!("unexpected character {other:?}"))),
            };
            if star {
                suffix.push(bit);
            } else {
                prefix.push(bit);
            }
        }
        let kind = if negated && star && prefix.is_empty() && suffix.is_empty() {
            PatternKind::HalveHide
        } else {
            PatternKind::Select
        };
        Ok(Pattern {
            source: src.to_string(),
            negated,
            prefix,
            suffix,
            star,
            kind,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    /// Resolve to exactly `n` booleans. For `HalveHide` the result marks the
    /// sites that stay visible: the lower `ceil(n/2)`.
    pub fn resolve(&self, n: usize) -> Result<Vec<bool>, DslError> {
        if self.kind == PatternKind::HalveHide {
            let keep = n.div_ceil(2);
            return Ok((0..n).map(|i| i < keep).collect());
        }
        let bits: Vec<bool> = if self.star {
            let fixed = self.prefix.len() + self.suffix.len();
            if fixed > n {
                return Err(DslError::PatternTooLong {
                    src: self.source.clone(),
                    n,
                });
            }
            let mut v = self.prefix.clone();
            if self.prefix.is_empty() && self.suffix.is_empty() {
                // bare "*" selects everything
                v.resize(n, true);
            } else {
                v.resize(n - self.suffix.len(), false);
                v.extend_from_slice(&self.suffix);
            }
            v
        } else {
            (0..n).map(|i| self.prefix[i % self.prefix.len()]).collect()
        };
        Ok(if self.negated {
            bits.into_iter().map(|b| !b).collect()
        } else {
            bits
        })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

/// Parse a pattern string. Thin wrapper over [`Pattern::parse`].
pub fn parse_pattern(src: &str) -> Result<Pattern, DslError> {
    Pattern::parse(src)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_one_selects_first_site() {
        let p = parse_pattern("1*").unwrap();
        assert_eq!(p.resolve(5).unwrap(), vec![true, false, false, false, false]);
    }

    #[test]
    fn bare_star_selects_all() {
        assert_eq!(parse_pattern("*").unwrap().resolve(3).unwrap(), vec![true; 3]);
    }

    #[test]
    fn trailing_one_selects_last_site() {
        let p = parse_pattern("*1").unwrap();
        assert_eq!(p.resolve(4).unwrap(), vec![false, false, false, true]);
    }

    #[test]
    fn halving_keeps_lower_half() {
        let p = parse_pattern("!*").unwrap();
        assert_eq!(p.kind(), PatternKind::HalveHide);
        let kept: Vec<usize> = p
            .resolve(8)
            .unwrap()
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        assert_eq!(kept, vec![0, 1, 2, 3]);
        assert_eq!(p.resolve(5).unwrap().iter().filter(|b| **b).count(), 3);
    }

    #[test]
    fn negation_and_tiling() {
        assert_eq!(
            parse_pattern("!1*").unwrap().resolve(3).unwrap(),
            vec![false, true, true]
        );
        assert_eq!(
            parse_pattern("10").unwrap().resolve(5).unwrap(),
            vec![true, false, true, false, true]
        );
    }

    #[test]
    fn malformed_inputs() {
        for bad in ["", "!", "1**", "*1*", "12", "1!0"] {
            assert!(parse_pattern(bad).is_err(), "{bad:?} should fail");
        }
        assert!(matches!(
            parse_pattern("11*1").unwrap().resolve(2),
            Err(DslError::PatternTooLong { .. })
        ));
    }
}
