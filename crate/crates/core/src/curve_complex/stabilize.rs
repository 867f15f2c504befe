use super::{cantor::is_cantor, CurveClass, CurveComplexError, PullbackGraph};

/// Answer of a pullback oracle for one class: the homotopy classes of the
/// non-peripheral preimage components, with multiplicities, and how many
/// preimage components are peripheral or non-essential.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClassPullback {
    pub preimages: Vec<(String, u32)>,
    pub peripheral: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizedGraph {
    pub graph: PullbackGraph,
    /// Number of pullback rounds before the class count stopped growing.
    pub depth: usize,
}

/// Closes a Cantor multicurve under pullback until the class count stops
/// growing, yielding a stable Cantor multicurve.
///
/// `marked_points` is `#P`; a multicurve has at most `#P - 3` classes, so an
/// oracle that keeps producing fresh classes past that bound is inconsistent.
pub fn induce_stable<F>(
    graph: &PullbackGraph,
    mut oracle: F,
    marked_points: usize,
) -> Result<StabilizedGraph, CurveComplexError>
where
    F: FnMut(&str) -> ClassPullback,
{
    if !is_cantor(graph)?.verdict {
        return Err(CurveComplexError::NotCantor);
    }
    let bound = marked_points.saturating_sub(3);
    let mut classes: Vec<CurveClass> = graph.classes().to_vec();
    if classes.len() > bound {
        return Err(CurveComplexError::OracleExceedsBound {
            found: classes.len(),
            bound,
        });
    }
    let mut cache: Vec<ClassPullback> = Vec::new();
    let mut depth = 0;
    loop {
        while cache.len() < classes.len() {
            let id = classes[cache.len()].id.clone();
            cache.push(oracle(&id));
        }
        let mut next = classes.clone();
        for pb in &cache {
            for (id, _) in &pb.preimages {
                if !next.iter().any(|c| &c.id == id) {
                    next.push(CurveClass {
                        id: id.clone(),
                        label: None,
                    });
                }
            }
        }
        if next.len() > bound {
            return Err(CurveComplexError::OracleExceedsBound {
                found: next.len(),
                bound,
            });
        }
        if next.len() == classes.len() {
            break;
        }
        classes = next;
        depth += 1;
    }
    let n = classes.len();
    let mut matrix = vec![vec![0u32; n]; n];
    let mut extra = vec![0u32; n];
    for (b, pb) in cache.iter().enumerate() {
        for (id, m) in &pb.preimages {
            match classes.iter().position(|c| &c.id == id) {
                Some(g) => matrix[g][b] += m,
                None => extra[b] += m,
            }
        }
    }
    let graph = PullbackGraph::new(classes, matrix, Some(extra), graph.degree())?;
    Ok(StabilizedGraph { graph, depth })
}
