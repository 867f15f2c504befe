use serde::Serialize;

use super::spec::{AnnularSystemSpec, Side, Subannulus};
use super::AnnulusError;
use crate::coding::{classify_code, Code, CodeClass, Orientation};

pub const DEFAULT_HORIZON: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "fate", rename_all = "snake_case")]
pub enum NestedFate {
    /// From `from_depth` on, the listed boundary circles of `A^from_depth`
    /// are shared by every deeper piece; the nested intersection is then
    /// predicted to be empty. `exact` is set when the code is eventually
    /// periodic and persistence was decided rather than observed.
    SharesBoundaryForever {
        from_depth: usize,
        sides: Vec<Side>,
        exact: bool,
    },
    /// Greedy chain `0 = n_0 < n_1 < ...` with `A^{n_{k+1}} ⊂⊂ A^{n_k}`.
    CompactlyNestedAt { depths: Vec<usize> },
    Inconclusive {
        depth: usize,
        inner_alive: bool,
        outer_alive: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentClass {
    Periodic {
        period: usize,
        quasicircle_expected: bool,
    },
    Preperiodic {
        preperiod: usize,
        period: usize,
    },
    Wandering {
        horizon: usize,
    },
}

fn shares(s: &Subannulus, side: Side) -> bool {
    match side {
        Side::Inner => s.shares_inner,
        Side::Outer => s.shares_outer,
    }
}

/// Boundary circles of `A^start` still shared after following the code up
/// to `end`: `Ok(m)` with the first depth `m` at which neither survives.
pub(crate) fn break_depth(
    spec: &AnnularSystemSpec,
    code: &Code,
    start: usize,
    end: usize,
) -> Result<usize, (bool, bool)> {
    let (mut inner, mut outer) = (true, true);
    let mut eps = Orientation::Preserving;
    for k in start..end {
        let Some(i) = code.symbol(k) else { break };
        let s = &spec.subannuli[i];
        let here = |side: Side| match eps {
            Orientation::Preserving => side,
            Orientation::Reversing => side.flip(),
        };
        inner &= shares(s, here(Side::Inner));
        outer &= shares(s, here(Side::Outer));
        eps = eps.compose(s.orientation);
        if !inner && !outer {
            return Ok(k + 1);
        }
    }
    Err((inner, outer))
}

/// Whether `A^m ⊂⊂ A^n` along the code, for `n < m`.
pub fn compactly_contained(spec: &AnnularSystemSpec, code: &Code, n: usize, m: usize) -> bool {
    matches!(break_depth(spec, code, n, m), Ok(k) if k <= m)
}

fn check_code(spec: &AnnularSystemSpec, code: &Code, upto: usize) -> Result<(), AnnulusError> {
    let w = code.prefix(upto);
    if spec.branch_graph().is_valid_code(&w) {
        Ok(())
    } else {
        Err(AnnulusError::InvalidCode(w))
    }
}

/// Period data of an eventually periodic code: (preperiod, period).
fn periodic_shape(code: &Code) -> Option<(usize, usize)> {
    match code.normalized() {
        Code::EventuallyPeriodic { prefix, cycle } if !cycle.is_empty() => {
            Some((prefix.len(), cycle.len()))
        }
        _ => None,
    }
}

pub fn nested_fate(
    spec: &AnnularSystemSpec,
    code: &Code,
    horizon: usize,
) -> Result<NestedFate, AnnulusError> {
    spec.check_syntax()?;
    let shape = periodic_shape(code);
    let avail = code.len().unwrap_or(usize::MAX);
    let check_to = match shape {
        Some((k, p)) => horizon.max(k + 2 * p) + 2 * p,
        None => avail.min(horizon),
    };
    check_code(spec, code, check_to)?;

    let mut depths = Vec::new();
    let mut n0 = 0usize;
    loop {
        match shape {
            Some((k, p)) => {
                // positions past the preperiod repeat with period p and the
                // composite orientation with period 2p, so 2p steps decide
                let end = n0.max(k) + 2 * p;
                match break_depth(spec, code, n0, end) {
                    Ok(m) => {
                        if m > horizon {
                            return Ok(NestedFate::CompactlyNestedAt { depths });
                        }
                        depths.push(m);
                        n0 = m;
                    }
                    Err((i, o)) => return Ok(forever(n0, i, o, true)),
                }
            }
            None => {
                let end = avail.min(horizon);
                match break_depth(spec, code, n0, end) {
                    Ok(m) => {
                        depths.push(m);
                        n0 = m;
                    }
                    Err((i, o)) => {
                        let unresolved = end.saturating_sub(n0);
                        if unresolved == 0 && !depths.is_empty() {
                            return Ok(NestedFate::CompactlyNestedAt { depths });
                        }
                        if end == horizon && 2 * unresolved >= horizon {
                            return Ok(forever(n0, i, o, false));
                        }
                        if !depths.is_empty() {
                            return Ok(NestedFate::CompactlyNestedAt { depths });
                        }
                        return Ok(NestedFate::Inconclusive {
                            depth: n0,
                            inner_alive: i,
                            outer_alive: o,
                        });
                    }
                }
            }
        }
    }
}

fn forever(from_depth: usize, inner: bool, outer: bool, exact: bool) -> NestedFate {
    let mut sides = Vec::new();
    if inner {
        sides.push(Side::Inner);
    }
    if outer {
        sides.push(Side::Outer);
    }
    NestedFate::SharesBoundaryForever {
        from_depth,
        sides,
        exact,
    }
}

pub fn component_class(
    spec: &AnnularSystemSpec,
    code: &Code,
    horizon: usize,
) -> Result<ComponentClass, AnnulusError> {
    if let NestedFate::SharesBoundaryForever { from_depth, .. } = nested_fate(spec, code, horizon)?
    {
        return Err(AnnulusError::EmptyChain(from_depth));
    }
    Ok(match classify_code(code) {
        CodeClass::Periodic { period } => ComponentClass::Periodic {
            period,
            quasicircle_expected: compactly_contained(spec, code, 1, 2 * period + 1),
        },
        CodeClass::Preperiodic { preperiod, period } => {
            ComponentClass::Preperiodic { preperiod, period }
        }
        CodeClass::WanderingUpToHorizon { horizon } => ComponentClass::Wandering { horizon },
    })
}
