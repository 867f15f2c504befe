/// Tarjan's algorithm on adjacency lists. Components are returned in reverse
/// topological order of the condensation (sinks first).
pub fn strongly_connected_components(graph: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = graph.len();
    let mut state = TarjanState {
        index: 0,
        stack: Vec::new(),
        on_stack: vec![false; n],
        idx: vec![None; n],
        low: vec![0; n],
        comps: Vec::new(),
    };
    for v in 0..n {
        if state.idx[v].is_none() {
            strongconnect(v, graph, &mut state);
        }
    }
    state.comps
}

struct TarjanState {
    index: usize,
    stack: Vec<usize>,
    on_stack: Vec<bool>,
    idx: Vec<Option<usize>>,
    low: Vec<usize>,
    comps: Vec<Vec<usize>>,
}

fn strongconnect(v: usize, graph: &[Vec<usize>], state: &mut TarjanState) {
    state.idx[v] = Some(state.index);
    state.low[v] = state.index;
    state.index += 1;
    state.stack.push(v);
    state.on_stack[v] = true;

    for &w in &graph[v] {
        match state.idx[w] {
            None => {
                strongconnect(w, graph, state);
                state.low[v] = state.low[v].min(state.low[w]);
            }
            Some(iw) if state.on_stack[w] => state.low[v] = state.low[v].min(iw),
            _ => {}
        }
    }

    if Some(state.low[v]) == state.idx[v] {
        let mut comp = Vec::new();
        loop {
            let w = state.stack.pop().expect("stack underflow");
            state.on_stack[w] = false;
            comp.push(w);
            if w == v {
                break;
            }
        }
        comp.sort_unstable();
        state.comps.push(comp);
    }
}
