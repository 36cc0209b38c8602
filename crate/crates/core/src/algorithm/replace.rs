use crate::model::Clause;
use crate::rules::Transformer;

/// Applies deletion, functionality and totality to each clause until none
/// applies. Deleted clauses are dropped.
pub fn replace(t: &mut Transformer, clauses: Vec<Clause>) -> Vec<Clause> {
    let mut out = Vec::with_capacity(clauses.len());
    'clauses: for mut c in clauses {
        loop {
            if t.delete(&c) {
                continue 'clauses;
            }
            if let Some((i, j)) = first_pair(t, &c) {
                if let Ok(r) = t.functionality(&c, i, j) {
                    c = r;
                    continue;
                }
            }
            if let Some(pos) = (0..c.body.len()).find(|&p| t.removable(&c, p)) {
                if let Ok(r) = t.totality(&c, pos) {
                    c = r;
                    continue;
                }
            }
            break;
        }
        out.push(c);
    }
    out
}

fn first_pair(t: &Transformer, c: &Clause) -> Option<(usize, usize)> {
    let n = c.body.len();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| t.functional_pair(c, i, j))
}
