use std::collections::HashSet;

use rayon::prelude::*;

use super::graph::GraphOfGroups;
use super::normal_form::NormalForm;
use super::GroupError;

pub const DEFAULT_MAX_ELEMENTS: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallElement {
    pub form: NormalForm,
    pub wordlen: usize,
}

/// All group elements of word length at most `radius` for the standard
/// generators, each once, ordered by word length and then by normal form.
pub fn enumerate_ball(
    g: &GraphOfGroups,
    radius: usize,
    max_elements: usize,
) -> Result<Vec<BallElement>, GroupError> {
    let gens: Vec<NormalForm> = g.generators().into_iter().map(|x| x.word).collect();
    let mut seen: HashSet<NormalForm> = HashSet::new();
    let id = g.identity();
    seen.insert(id.clone());
    let mut out = vec![BallElement {
        form: id.clone(),
        wordlen: 0,
    }];
    let mut frontier = vec![id];
    for len in 1..=radius {
        let mut next: Vec<NormalForm> = frontier
            .par_iter()
            .flat_map_iter(|u| gens.iter().map(move |s| g.multiply(u, s)))
            .collect();
        next.par_sort_unstable();
        next.dedup();
        next.retain(|x| !seen.contains(x));
        if seen.len() + next.len() > max_elements {
            return Err(GroupError::BallTooLarge {
                count: seen.len(),
                limit: max_elements,
            });
        }
        seen.extend(next.iter().cloned());
        out.extend(next.iter().map(|f| BallElement {
            form: f.clone(),
            wordlen: len,
        }));
        frontier = next;
    }
    Ok(out)
}
