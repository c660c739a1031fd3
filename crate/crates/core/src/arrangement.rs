//! Hyperplanes, arrangements and the text input format.

use crate::error::{Error, Result};
use crate::rational::{dot, fmt_rat, parse_rat, sign_of, Int, QVec, Rat};
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// An affine hyperplane `a . x = b`, stored in a canonical integral form:
/// the vector `(a_1, ..., a_n, b)` has integer entries with content 1 and
/// the first nonzero `a_i` is positive. Canonicalization makes equality of
/// hyperplanes (and hence of flats) decidable by comparison.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    pub normal: Vec<Int>,
    pub offset: Int,
}

impl Hyperplane {
    /// Builds the canonical form from rational coefficients `a . x = b`.
    /// Fails if the normal vector is zero.
    pub fn new(normal: &[Rat], offset: &Rat) -> Option<Hyperplane> {
        if normal.iter().all(|c| c.is_zero()) {
            return None;
        }
        let mut denom_lcm = Int::from(1);
        for c in normal.iter().chain(std::iter::once(offset)) {
            denom_lcm = denom_lcm.lcm(c.denom());
        }
        let scaled: Vec<Int> = normal
            .iter()
            .chain(std::iter::once(offset))
            .map(|c| c.numer() * (&denom_lcm / c.denom()))
            .collect();
        let mut content = Int::zero();
        for v in &scaled {
            content = content.gcd(v);
        }
        let lead = scaled.iter().find(|v| !v.is_zero()).unwrap();
        if lead.is_negative() {
            content = -content;
        }
        let mut ints: Vec<Int> = scaled.iter().map(|v| v / &content).collect();
        let offset = ints.pop().unwrap();
        Some(Hyperplane { normal: ints, offset })
    }

    pub fn dim(&self) -> usize {
        self.normal.len()
    }

    pub fn normal_q(&self) -> QVec {
        self.normal.iter().map(|c| Rat::from_integer(c.clone())).collect()
    }

    pub fn offset_q(&self) -> Rat {
        Rat::from_integer(self.offset.clone())
    }

    /// Sign of `a . x - b` at the point `x`.
    pub fn eval_sign(&self, x: &[Rat]) -> i8 {
        let v = dot(&self.normal_q(), x) - self.offset_q();
        sign_of(&v)
    }

    /// Squared distance from `x` to the hyperplane.
    pub fn dist2(&self, x: &[Rat]) -> Rat {
        let n = self.normal_q();
        let v = dot(&n, x) - self.offset_q();
        &v * &v / dot(&n, &n)
    }
}

impl std::fmt::Display for Hyperplane {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let terms: Vec<String> = self.normal.iter().map(|c| c.to_string()).collect();
        write!(f, "{} = {}", terms.join(" "), self.offset)
    }
}

/// A finite ordered arrangement of hyperplanes in `R^n`.
#[derive(Clone, Debug)]
pub struct Arrangement {
    pub dim: usize,
    pub hyperplanes: Vec<Hyperplane>,
    /// Base point hint from the input file, when present.
    pub basepoint_hint: Option<QVec>,
}

impl Arrangement {
    pub fn new(dim: usize, hyperplanes: Vec<Hyperplane>) -> Result<Arrangement> {
        for (i, h) in hyperplanes.iter().enumerate() {
            if h.dim() != dim {
                return Err(Error::Usage(format!(
                    "hyperplane {} has dimension {}, expected {}",
                    i,
                    h.dim(),
                    dim
                )));
            }
            if hyperplanes[..i].contains(h) {
                return Err(Error::Usage(format!("duplicate hyperplane at index {i}")));
            }
        }
        Ok(Arrangement { dim, hyperplanes, basepoint_hint: None })
    }

    pub fn size(&self) -> usize {
        self.hyperplanes.len()
    }

    /// Sign vector of an arbitrary point.
    pub fn signs_at(&self, x: &[Rat]) -> Vec<i8> {
        self.hyperplanes.iter().map(|h| h.eval_sign(x)).collect()
    }
}

/// Parses the arrangement file format:
/// a `dim n` header line, then one line `a1 .. an b` per hyperplane
/// (whitespace-separated rationals, meaning `a . x = b`).
/// `#` starts a comment; an optional `# basepoint q1 .. qn` comment
/// supplies the default base point.
pub fn parse_arrangement(text: &str) -> Result<Arrangement> {
    let mut dim: Option<usize> = None;
    let mut planes: Vec<Hyperplane> = Vec::new();
    let mut hint: Option<QVec> = None;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(coords) = rest.strip_prefix("basepoint") {
                let parsed: Option<QVec> =
                    coords.split_whitespace().map(parse_rat).collect();
                match parsed {
                    Some(p) if !p.is_empty() => hint = Some(p),
                    _ => {
                        return Err(Error::Parse {
                            line: lineno,
                            msg: "malformed basepoint comment".into(),
                        })
                    }
                }
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        if dim.is_none() {
            let rest = line.strip_prefix("dim").ok_or_else(|| Error::Parse {
                line: lineno,
                msg: "expected header `dim n`".into(),
            })?;
            let n: usize = rest.trim().parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: "malformed dimension".into(),
            })?;
            dim = Some(n);
            continue;
        }
        let n = dim.unwrap();
        let nums: Vec<Rat> = line
            .split_whitespace()
            .map(|tok| {
                parse_rat(tok).ok_or(Error::Parse {
                    line: lineno,
                    msg: format!("malformed rational `{tok}`"),
                })
            })
            .collect::<Result<_>>()?;
        if nums.len() != n + 1 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected {} numbers, found {}", n + 1, nums.len()),
            });
        }
        let h = Hyperplane::new(&nums[..n], &nums[n]).ok_or(Error::Parse {
            line: lineno,
            msg: "zero normal vector".into(),
        })?;
        if planes.contains(&h) {
            return Err(Error::Parse {
                line: lineno,
                msg: "duplicate hyperplane".into(),
            });
        }
        planes.push(h);
    }

    let dim = dim.ok_or(Error::Parse { line: 0, msg: "missing `dim n` header".into() })?;
    if let Some(p) = &hint {
        if p.len() != dim {
            return Err(Error::Parse {
                line: 0,
                msg: "basepoint dimension does not match arrangement".into(),
            });
        }
    }
    let mut arr = Arrangement::new(dim, planes)?;
    arr.basepoint_hint = hint;
    Ok(arr)
}

impl std::fmt::Display for Arrangement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "dim {}", self.dim)?;
        for h in &self.hyperplanes {
            let coeffs: Vec<String> = h.normal.iter().map(|c| c.to_string()).collect();
            writeln!(f, "{} {}", coeffs.join(" "), h.offset)?;
        }
        if let Some(p) = &self.basepoint_hint {
            let coords: Vec<String> = p.iter().map(fmt_rat).collect();
            writeln!(f, "# basepoint {}", coords.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{qvec, rat, rat_frac};

    #[test]
    fn canonical_form() {
        // -2x + 4y = 6  ->  x - 2y = -3 with sign flip
        let h = Hyperplane::new(&qvec(&[-2, 4]), &rat(6)).unwrap();
        assert_eq!(h.normal, vec![Int::from(1), Int::from(-2)]);
        assert_eq!(h.offset, Int::from(-3));
        // 1/2 x = 3/4  ->  2x = 3
        let h = Hyperplane::new(&[rat_frac(1, 2), rat(0)], &rat_frac(3, 4)).unwrap();
        assert_eq!(h.normal, vec![Int::from(2), Int::from(0)]);
        assert_eq!(h.offset, Int::from(3));
        assert!(Hyperplane::new(&qvec(&[0, 0]), &rat(1)).is_none());
    }

    #[test]
    fn equality_after_scaling() {
        let a = Hyperplane::new(&qvec(&[2, 2]), &rat(13)).unwrap();
        let b = Hyperplane::new(&[rat(1), rat(1)], &rat_frac(13, 2)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_empty_and_axes() {
        let a = parse_arrangement("dim 2\n").unwrap();
        assert_eq!(a.dim, 2);
        assert_eq!(a.size(), 0);

        let a = parse_arrangement("# axes\ndim 2\n1 0 0\n0 1 0\n").unwrap();
        assert_eq!(a.size(), 2);
        assert_eq!(a.hyperplanes[0].eval_sign(&qvec(&[3, -1])), 1);
        assert_eq!(a.hyperplanes[1].eval_sign(&qvec(&[3, -1])), -1);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_arrangement("dim 2\n1 x 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_arrangement("dim 2\n0 0 5\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_arrangement("dim 2\n1 0 0\n2 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = parse_arrangement("dim 2\n1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn deconed_a3_fixture_parses() {
        let text = "dim 2\n2 2 13\n2 -2 7\n0 1 4\n2 2 23\n2 -2 -3\n# basepoint 6 18/5\n";
        let a = parse_arrangement(text).unwrap();
        assert_eq!(a.size(), 5);
        assert_eq!(a.dim, 2);
        assert_eq!(a.basepoint_hint.as_ref().unwrap()[1], rat_frac(18, 5));
    }
}
