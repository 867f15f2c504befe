//! Symbolic itineraries through the branches of an annular or interval system.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

/// Whether a branch preserves or swaps the inner/outer (left/right) sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Orientation {
    Preserving,
    Reversing,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Preserving => 1,
            Orientation::Reversing => -1,
        }
    }

    pub fn compose(self, other: Orientation) -> Orientation {
        if self == other {
            Orientation::Preserving
        } else {
            Orientation::Reversing
        }
    }
}

impl TryFrom<i8> for Orientation {
    type Error = String;
    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            1 => Ok(Orientation::Preserving),
            -1 => Ok(Orientation::Reversing),
            other => Err(format!("orientation must be +1 or -1, got {other}")),
        }
    }
}

impl From<Orientation> for i8 {
    fn from(o: Orientation) -> i8 {
        o.sign()
    }
}

/// A finite itinerary prefix, or an eventually periodic infinite itinerary
/// `prefix · cycle^∞`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Code {
    EventuallyPeriodic {
        prefix: Vec<usize>,
        cycle: Vec<usize>,
    },
    Finite(Vec<usize>),
}

impl Code {
    pub fn periodic(cycle: Vec<usize>) -> Self {
        Code::EventuallyPeriodic {
            prefix: Vec::new(),
            cycle,
        }
    }

    pub fn symbol(&self, k: usize) -> Option<usize> {
        match self {
            Code::Finite(w) => w.get(k).copied(),
            Code::EventuallyPeriodic { prefix, cycle } => {
                if k < prefix.len() {
                    Some(prefix[k])
                } else if cycle.is_empty() {
                    None
                } else {
                    Some(cycle[(k - prefix.len()) % cycle.len()])
                }
            }
        }
    }

    /// Available length; `None` for infinite codes.
    pub fn len(&self) -> Option<usize> {
        match self {
            Code::Finite(w) => Some(w.len()),
            Code::EventuallyPeriodic { prefix, cycle } if cycle.is_empty() => Some(prefix.len()),
            Code::EventuallyPeriodic { .. } => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    /// First `n` symbols (fewer if the code is finite and shorter).
    pub fn prefix(&self, n: usize) -> Vec<usize> {
        (0..n).map_while(|k| self.symbol(k)).collect()
    }

    /// Minimal preperiod/period form of an eventually periodic code.
    pub fn normalized(&self) -> Code {
        match self {
            Code::Finite(_) => self.clone(),
            Code::EventuallyPeriodic { prefix, cycle } => {
                if cycle.is_empty() {
                    return Code::Finite(prefix.clone());
                }
                let p = minimal_period(cycle);
                let mut cycle: Vec<usize> = cycle[..p].to_vec();
                let mut prefix = prefix.clone();
                while let Some(&last) = prefix.last() {
                    if last != *cycle.last().unwrap() {
                        break;
                    }
                    prefix.pop();
                    cycle.rotate_right(1);
                }
                Code::EventuallyPeriodic { prefix, cycle }
            }
        }
    }
}

fn minimal_period(cycle: &[usize]) -> usize {
    let n = cycle.len();
    (1..=n)
        .find(|&p| n % p == 0 && (0..n).all(|i| cycle[i] == cycle[(i + p) % n]))
        .unwrap_or(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CodeClass {
    Periodic { period: usize },
    Preperiodic { preperiod: usize, period: usize },
    WanderingUpToHorizon { horizon: usize },
}

/// Exact for eventually periodic codes; finite codes are treated as the
/// visible prefix of a stream (see [`classify_stream`]).
pub fn classify_code(code: &Code) -> CodeClass {
    match code.normalized() {
        Code::EventuallyPeriodic { prefix, cycle } => {
            if prefix.is_empty() {
                CodeClass::Periodic {
                    period: cycle.len(),
                }
            } else {
                CodeClass::Preperiodic {
                    preperiod: prefix.len(),
                    period: cycle.len(),
                }
            }
        }
        Code::Finite(w) => classify_stream(w.iter().copied(), w.len()),
    }
}

/// Horizon-limited verdict on a streamed code: the first `horizon` symbols
/// are searched for a tail `w[k..]` of period `p` with `k ≤ h/2`, `p ≤ h/4`.
pub fn classify_stream<I: IntoIterator<Item = usize>>(stream: I, horizon: usize) -> CodeClass {
    let w: Vec<usize> = stream.into_iter().take(horizon).collect();
    let h = w.len();
    for p in 1..=h / 4 {
        // smallest k such that w[k..] has period p
        let mut k = h - p;
        while k > 0 && w[k - 1] == w[k - 1 + p] {
            k -= 1;
        }
        if k <= h / 2 {
            return if k == 0 {
                CodeClass::Periodic { period: p }
            } else {
                CodeClass::Preperiodic {
                    preperiod: k,
                    period: p,
                }
            };
        }
    }
    CodeClass::WanderingUpToHorizon { horizon: h }
}

/// Concatenation of all words over `{0, .., alphabet-1}` in length-then-
/// lexicographic order: `0 1 00 01 10 11 000 ...` for a binary alphabet. Not
/// eventually periodic, so in a full shift it codes a wandering component.
pub fn champernowne(alphabet: usize) -> impl Iterator<Item = usize> {
    assert!(alphabet >= 2, "need at least two symbols");
    (1u32..).flat_map(move |len| {
        let count = alphabet.pow(len);
        (0..count).flat_map(move |mut word| {
            let mut digits = vec![0usize; len as usize];
            for d in digits.iter_mut().rev() {
                *d = word % alphabet;
                word /= alphabet;
            }
            digits
        })
    })
}

/// Branch transition structure shared by annular and interval systems:
/// branch `i` lives in component `parents[i]` and maps onto `targets[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchGraph {
    pub components: usize,
    pub parents: Vec<usize>,
    pub targets: Vec<usize>,
}

impl BranchGraph {
    pub fn branches_in(&self, component: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.parents.len()).filter(move |&i| self.parents[i] == component)
    }

    pub fn is_valid_code(&self, code: &[usize]) -> bool {
        code.iter().all(|&i| i < self.parents.len())
            && code
                .windows(2)
                .all(|w| self.targets[w[0]] == self.parents[w[1]])
    }

    /// All valid codes of length `n`, lexicographically.
    pub fn codes(&self, n: usize) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..n {
            let mut next = Vec::new();
            for c in &out {
                let allowed: Vec<usize> = match c.last() {
                    None => (0..self.parents.len()).collect(),
                    Some(&last) => self.branches_in(self.targets[last]).collect(),
                };
                for i in allowed {
                    let mut d = c.clone();
                    d.push(i);
                    next.push(d);
                }
            }
            out = next;
        }
        out
    }

    /// Number of depth-`n` pieces in each component, capped at 2.
    fn capped_counts(&self, prev: &[u8]) -> Vec<u8> {
        (0..self.components)
            .map(|c| {
                self.branches_in(c)
                    .map(|i| prev[self.targets[i]] as u32)
                    .sum::<u32>()
                    .min(2) as u8
            })
            .collect()
    }

    /// Least `n` at which each component contains at least two depth-`n`
    /// pieces (per component), and the least `n` at which all do at once.
    /// Exact: the capped count vector is iterated until it cycles.
    pub fn disconnection_depths(&self) -> (Vec<Option<usize>>, Option<usize>) {
        let mut per = vec![None; self.components];
        let mut all = None;
        let mut seen: HashMap<Vec<u8>, usize> = HashMap::new();
        let mut counts = vec![1u8; self.components];
        let mut n = 0usize;
        loop {
            if seen.insert(counts.clone(), n).is_some() {
                break;
            }
            n += 1;
            counts = self.capped_counts(&counts);
            for (c, &k) in counts.iter().enumerate() {
                if k >= 2 && per[c].is_none() {
                    per[c] = Some(n);
                }
            }
            if all.is_none() && counts.iter().all(|&k| k >= 2) {
                all = Some(n);
            }
        }
        (per, all)
    }
}
