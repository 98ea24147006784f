use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use super::ObstructionError;

pub const DEFAULT_MAX_STATES: usize = 2_000_000;

/// Right-angled Coxeter group: involutive generators, with the listed
/// pairs commuting.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct Racg {
    pub generators: Vec<String>,
    #[serde(default)]
    pub commuting: Vec<[GenRef; 2]>,
}

/// A generator given by position or by name.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum GenRef {
    Index(usize),
    Name(String),
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GrowthTable {
    /// `sphere[n]` is the number of elements of word length exactly `n`
    pub sphere: Vec<u64>,
    pub ball: Vec<u64>,
    /// set when the state guard stopped the search early
    pub truncated: bool,
    pub max_states: usize,
}

struct Commute {
    k: usize,
    table: Vec<bool>,
}

impl Commute {
    fn get(&self, a: u8, b: u8) -> bool {
        self.table[a as usize * self.k + b as usize]
    }
}

impl Racg {
    pub fn from_json(text: &str) -> Result<Self, ObstructionError> {
        let g: Racg = serde_json::from_str(text).map_err(|e| ObstructionError::InvalidInput(e.to_string()))?;
        g.validate()?;
        Ok(g)
    }

    /// Commutation graph a cycle of length `k`.
    pub fn polygon(k: usize) -> Self {
        let generators: Vec<String> = (0..k).map(|i| format!("s{i}")).collect();
        let commuting = (0..k)
            .map(|i| [GenRef::Index(i), GenRef::Index((i + 1) % k)])
            .collect();
        Self { generators, commuting }
    }

    pub fn infinite_dihedral() -> Self {
        Self {
            generators: vec!["a".into(), "b".into()],
            commuting: Vec::new(),
        }
    }

    pub fn commuting_pair() -> Self {
        Self {
            generators: vec!["a".into(), "b".into()],
            commuting: vec![[GenRef::Index(0), GenRef::Index(1)]],
        }
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn validate(&self) -> Result<(), ObstructionError> {
        if self.generators.is_empty() || self.generators.len() > 255 {
            return Err(ObstructionError::InvalidInput("need between 1 and 255 generators".into()));
        }
        let names: BTreeSet<&String> = self.generators.iter().collect();
        if names.len() != self.generators.len() {
            return Err(ObstructionError::InvalidInput("duplicate generator".into()));
        }
        for [a, b] in &self.commuting {
            match (self.index(a), self.index(b)) {
                (Some(i), Some(j)) if i != j => {}
                _ => return Err(ObstructionError::InvalidInput(format!("bad commuting pair ({a:?}, {b:?})"))),
            }
        }
        Ok(())
    }

    fn index(&self, r: &GenRef) -> Option<usize> {
        match r {
            GenRef::Index(i) => (*i < self.rank()).then_some(*i),
            GenRef::Name(s) => self.generators.iter().position(|g| g == s),
        }
    }

    /// Index pairs of commuting generators.
    pub fn commuting_indices(&self) -> Vec<(usize, usize)> {
        let idx = |r: &GenRef| self.index(r).expect("validated");
        self.commuting.iter().map(|[a, b]| (idx(a), idx(b))).collect()
    }

    fn commute_table(&self) -> Commute {
        let k = self.rank();
        let mut table = vec![false; k * k];
        for (a, b) in self.commuting_indices() {
            table[a * k + b] = true;
            table[b * k + a] = true;
        }
        Commute { k, table }
    }
}

/// Whether right multiplication by `s` shortens the reduced word `w`.
fn cancels(c: &Commute, w: &[u8], s: u8) -> bool {
    for &x in w.iter().rev() {
        if x == s {
            return true;
        }
        if !c.get(x, s) {
            return false;
        }
    }
    false
}

/// ShortLex-least word among the commutation rearrangements of a reduced word.
fn normal_form(c: &Commute, w: &[u8]) -> Vec<u8> {
    let mut rest = w.to_vec();
    let mut out = Vec::with_capacity(w.len());
    while !rest.is_empty() {
        // letters movable to the front: every earlier letter commutes with it
        let mut best: Option<(u8, usize)> = None;
        for (i, &x) in rest.iter().enumerate() {
            if rest[..i].iter().all(|&y| y != x && c.get(y, x)) && best.map_or(true, |(b, _)| x < b) {
                best = Some((x, i));
            }
        }
        let (x, i) = best.expect("first letter is always movable");
        out.push(x);
        rest.remove(i);
    }
    out
}

/// Sphere sizes up to radius `n` by breadth-first search over normal forms.
/// Stops with a partial table once more than `max_states` forms are held.
pub fn racg_growth(g: &Racg, n: usize, max_states: usize) -> Result<GrowthTable, ObstructionError> {
    g.validate()?;
    let c = g.commute_table();
    let k = g.rank() as u8;
    let mut sphere = vec![1u64];
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    let mut truncated = false;
    for _ in 0..n {
        let mut next: HashSet<Vec<u8>> = HashSet::new();
        for w in &layer {
            for s in 0..k {
                if cancels(&c, w, s) {
                    continue;
                }
                let mut ws = w.clone();
                ws.push(s);
                next.insert(normal_form(&c, &ws));
            }
            if next.len() > max_states {
                truncated = true;
                break;
            }
        }
        if truncated {
            break;
        }
        sphere.push(next.len() as u64);
        layer = next.into_iter().collect();
    }
    let ball = sphere
        .iter()
        .scan(0u64, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect();
    Ok(GrowthTable {
        sphere,
        ball,
        truncated,
        max_states,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type Mat = Vec<i64>;

    /// Sphere sizes from the Tits representation, which is faithful.
    fn tits_spheres(g: &Racg, n: usize) -> Vec<u64> {
        let k = g.rank();
        let mut b = vec![-1i64; k * k];
        for i in 0..k {
            b[i * k + i] = 1;
        }
        for (i, j) in g.commuting_indices() {
            b[i * k + j] = 0;
            b[j * k + i] = 0;
        }
        // σ_i(v) = v − 2B(e_i, v)e_i, as matrices acting on columns
        let sigma: Vec<Mat> = (0..k)
            .map(|i| {
                let mut m = vec![0i64; k * k];
                for c in 0..k {
                    m[c * k + c] = 1;
                    m[i * k + c] -= 2 * b[i * k + c];
                }
                m
            })
            .collect();
        let mul = |a: &Mat, m: &Mat| {
            let mut out = vec![0i64; k * k];
            for r in 0..k {
                for c in 0..k {
                    out[r * k + c] = (0..k).map(|t| a[r * k + t] * m[t * k + c]).sum();
                }
            }
            out
        };
        let id: Mat = (0..k * k).map(|x| i64::from(x % (k + 1) == 0)).collect();
        let mut seen: HashSet<Mat> = HashSet::from([id.clone()]);
        let mut layer = vec![id];
        let mut out = vec![1];
        for _ in 0..n {
            let mut next = Vec::new();
            for a in &layer {
                for s in &sigma {
                    let p = mul(a, s);
                    if seen.insert(p.clone()) {
                        next.push(p);
                    }
                }
            }
            out.push(next.len() as u64);
            layer = next;
        }
        out
    }

    #[test]
    fn pentagon_matches_tits_oracle() {
        let g = Racg::polygon(5);
        let t = racg_growth(&g, 8, DEFAULT_MAX_STATES).unwrap();
        assert_eq!(t.sphere, tits_spheres(&g, 8));
        assert!(!t.truncated);
    }

    #[test]
    fn small_cases() {
        let d = racg_growth(&Racg::infinite_dihedral(), 6, 100).unwrap();
        assert_eq!(d.ball, vec![1, 3, 5, 7, 9, 11, 13]);
        let p = racg_growth(&Racg::commuting_pair(), 5, 100).unwrap();
        assert_eq!(p.ball, vec![1, 3, 4, 4, 4, 4]);
    }

    #[test]
    fn guard_and_parsing() {
        let t = racg_growth(&Racg::polygon(5), 12, 50).unwrap();
        assert!(t.truncated && t.sphere.len() < 13);
        let g = Racg::from_json(r#"{"generators":["a","b","c"],"commuting":[["a","b"]]}"#).unwrap();
        assert_eq!(g.commuting_indices(), vec![(0, 1)]);
        assert!(Racg::from_json(r#"{"generators":["a"],"commuting":[["a","z"]]}"#).is_err());
        let h = Racg::from_json(r#"{"generators":["a","b","c"],"commuting":[[1,2]]}"#).unwrap();
        assert_eq!(h.commuting_indices(), vec![(1, 2)]);
        assert!(Racg::from_json(r#"{"generators":["a","b"],"commuting":[[0,2]]}"#).is_err());
    }
}
