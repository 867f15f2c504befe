use serde::{Deserialize, Serialize};

use super::{DepthInterval, IntervalError, IntervalSystem, SubInterval};
use crate::coding::Orientation;
use crate::scalar::Scalar;

/// Number as it appears in a system file: an integer, a float, or a string
/// such as `"1/3"` or `"0.25"` (strings are read exactly by rational types).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Number {
    Int(i64),
    Float(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubIntervalSpec {
    pub parent: usize,
    pub target: usize,
    pub left: Number,
    pub right: Number,
    pub orientation: Orientation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSystemSpec {
    /// `[left, right]` per interval.
    pub intervals: Vec<[Number; 2]>,
    pub subintervals: Vec<SubIntervalSpec>,
}

pub fn parse_scalar<T: Scalar>(s: &str) -> Result<T, IntervalError> {
    let bad = || IntervalError::Parse(s.to_string());
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        if b == 0 {
            return Err(bad());
        }
        return Ok(T::from_ratio(a, b));
    }
    if let Ok(k) = s.parse::<i64>() {
        return T::from_i64(k).ok_or_else(bad);
    }
    // plain decimal: read exactly as digits / 10^k when it fits
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        if frac.len() <= 18 && !digits.is_empty() && digits.bytes().all(|c| c.is_ascii_digit()) {
            if let Ok(num) = digits.parse::<i64>() {
                let den = 10i64.pow(frac.len() as u32);
                return Ok(T::from_ratio(if neg { -num } else { num }, den));
            }
        }
    }
    let x: f64 = s.parse().map_err(|_| bad())?;
    T::from_f64(x).ok_or_else(bad)
}

fn number<T: Scalar>(n: &Number) -> Result<T, IntervalError> {
    match n {
        Number::Int(k) => T::from_i64(*k).ok_or_else(|| IntervalError::Parse(k.to_string())),
        Number::Float(x) => T::from_f64(*x).ok_or_else(|| IntervalError::Parse(x.to_string())),
        Number::Text(s) => parse_scalar(s),
    }
}

impl IntervalSystemSpec {
    pub fn build<T: Scalar>(&self) -> Result<IntervalSystem<T>, IntervalError> {
        let mut lefts = Vec::with_capacity(self.intervals.len());
        for (j, [l, r]) in self.intervals.iter().enumerate() {
            let (l, r): (T, T) = (number(l)?, number(r)?);
            if (r - l.clone() - T::one()).abs() > T::containment_tol() {
                return Err(IntervalError::NotUnit(j));
            }
            lefts.push(l);
        }
        let subs = self
            .subintervals
            .iter()
            .map(|s| {
                Ok(SubInterval {
                    parent: s.parent,
                    target: s.target,
                    left: number(&s.left)?,
                    right: number(&s.right)?,
                    orientation: s.orientation,
                })
            })
            .collect::<Result<Vec<_>, IntervalError>>()?;
        IntervalSystem::new(lefts, subs)
    }
}

impl<T: Scalar> IntervalSystem<T> {
    pub fn to_spec(&self) -> IntervalSystemSpec {
        let text = |x: &T| Number::Text(x.to_string());
        IntervalSystemSpec {
            intervals: (0..self.len())
                .map(|j| {
                    let (l, r) = self.interval(j);
                    [text(&l), text(&r)]
                })
                .collect(),
            subintervals: self
                .subs
                .iter()
                .map(|s| SubIntervalSpec {
                    parent: s.parent,
                    target: s.target,
                    left: text(&s.left),
                    right: text(&s.right),
                    orientation: s.orientation,
                })
                .collect(),
        }
    }
}

/// `code,left,right,left_approx,right_approx`; codes are dot-separated.
pub fn to_csv<T: Scalar>(intervals: &[DepthInterval<T>]) -> String {
    let mut out = String::from("code,left,right,left_approx,right_approx\n");
    for d in intervals {
        let code: Vec<String> = d.code.iter().map(|i| i.to_string()).collect();
        out.push_str(&format!(
            "{},{},{},{:.8e},{:.8e}\n",
            code.join("."),
            d.left,
            d.right,
            d.left.to_f64_lossy(),
            d.right.to_f64_lossy()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn parse_forms() {
        let q = |a, b| BigRational::from_ratio(a, b);
        assert_eq!(parse_scalar::<BigRational>("1/3").unwrap(), q(1, 3));
        assert_eq!(parse_scalar::<BigRational>("0.25").unwrap(), q(1, 4));
        assert_eq!(parse_scalar::<BigRational>("-1.5").unwrap(), q(-3, 2));
        assert_eq!(parse_scalar::<BigRational>("7").unwrap(), q(7, 1));
        assert!((parse_scalar::<f64>("1e-3").unwrap() - 1e-3).abs() < 1e-18);
        assert!(parse_scalar::<f64>("x").is_err());
        assert!(parse_scalar::<BigRational>("1/0").is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"intervals": [[0, 1]],
            "subintervals": [
              {"parent": 0, "target": 0, "left": 0, "right": "1/3", "orientation": 1},
              {"parent": 0, "target": 0, "left": "2/3", "right": 1, "orientation": -1}]}"#;
        let spec: IntervalSystemSpec = serde_json::from_str(text).unwrap();
        let sys = spec.build::<BigRational>().unwrap();
        let again = sys.to_spec().build::<BigRational>().unwrap();
        assert_eq!(sys, again);
        let csv = to_csv(&sys.preimage_depth(1));
        assert_eq!(
            csv.lines()
                .nth(1)
                .unwrap()
                .split(',')
                .take(3)
                .collect::<Vec<_>>(),
            ["0", "0", "1/3"]
        );
    }
}
