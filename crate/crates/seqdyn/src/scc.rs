//! Strongly connected components, iterative Tarjan.

/// Component id per vertex. Components are numbered in reverse
/// topological order of discovery, so `comp[u] <= comp[v]` never says
/// anything on its own; only equality matters to callers.
pub fn strongly_connected_components(n: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    const UNSET: usize = usize::MAX;
    let mut index = vec![UNSET; n];
    let mut lowlink = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSET; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0usize;
    let mut next_comp = 0usize;

    // Explicit call stack of (vertex, next edge position).
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSET {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        lowlink[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&(v, pos)) = call.last() {
            if pos < adj[v].len() {
                call.last_mut().unwrap().1 += 1;
                let w = adj[v][pos];
                if index[w] == UNSET {
                    index[w] = next_index;
                    lowlink[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w] = false;
                        comp[w] = next_comp;
                        if w == v {
                            break;
                        }
                    }
                    next_comp += 1;
                }
            }
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_two_cycles_joined_by_an_edge() {
        // 0 <-> 1 -> 2 <-> 3
        let adj = vec![vec![1], vec![0, 2], vec![3], vec![2]];
        let comp = strongly_connected_components(4, &adj);
        assert_eq!(comp[0], comp[1]);
        assert_eq!(comp[2], comp[3]);
        assert_ne!(comp[0], comp[2]);
    }

    #[test]
    fn dag_gives_singletons() {
        let adj = vec![vec![1, 2], vec![2], vec![]];
        let comp = strongly_connected_components(3, &adj);
        assert_eq!(comp.iter().collect::<std::collections::BTreeSet<_>>().len(), 3);
    }

    #[test]
    fn empty_graph() {
        assert!(strongly_connected_components(0, &[]).is_empty());
    }
}
