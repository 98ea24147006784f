#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use zstructure::graph_of_groups::{GraphOfGroups, IntMatrix, NormalForm};

pub const TWO_VERTEX: &str = r#"{
  "vertices": [{"id": "u", "rank": 1}, {"id": "v", "rank": 1}],
  "edges": [
    {"id": "e", "from": "u", "to": "v", "minus": [[2]], "plus": [[3]], "tree": true},
    {"id": "f", "from": "u", "to": "v", "minus": [[1]], "plus": [[2]]}
  ],
  "base": "u"
}"#;

pub fn two_vertex() -> GraphOfGroups {
    GraphOfGroups::from_json(TWO_VERTEX).unwrap()
}

pub fn bs(m: i64, n: i64) -> GraphOfGroups {
    GraphOfGroups::baumslag_solitar(m, n).unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng) -> IntMatrix {
    loop {
        let e: Vec<i64> = (0..4).map(|_| rng.gen_range(-3..=3)).collect();
        let det = (e[0] * e[3] - e[1] * e[2]).abs();
        if (2..=4).contains(&det) {
            return IntMatrix::from_rows(&[vec![e[0], e[1]], vec![e[2], e[3]]]).unwrap();
        }
    }
}

/// Loop graph over `ℤ²` with both edge matrices of determinant 2, 3 or 4 in
/// absolute value.
pub fn random_torus_loop(rng: &mut ChaCha8Rng) -> GraphOfGroups {
    GraphOfGroups::loop_graph(random_matrix(rng), random_matrix(rng)).unwrap()
}

/// Product of `len` uniformly chosen standard generators.
pub fn random_word(g: &GraphOfGroups, rng: &mut ChaCha8Rng, len: usize) -> NormalForm {
    let gens = g.generators();
    let mut w = g.identity();
    for _ in 0..len {
        w = g.multiply(&w, &gens[rng.gen_range(0..gens.len())].word);
    }
    w
}

/// The generator sequence as well as its product.
pub fn random_letters(g: &GraphOfGroups, rng: &mut ChaCha8Rng, len: usize) -> Vec<NormalForm> {
    let gens = g.generators();
    (0..len).map(|_| gens[rng.gen_range(0..gens.len())].word.clone()).collect()
}

use zstructure::metric_models::{hyperbolic, ModelPoint, Space, TreePoint};

pub fn model_spaces() -> Vec<Space> {
    vec![
        Space::euclidean(2),
        Space::hyperbolic(),
        Space::tree(3),
        Space::product(Space::tree(3), Space::euclidean(1)),
        Space::product(Space::hyperbolic(), Space::euclidean(1)),
    ]
}

/// Random point within roughly `scale` of the basepoint.
pub fn random_point(space: &Space, rng: &mut ChaCha8Rng, scale: f64) -> ModelPoint {
    match space {
        Space::Euclidean { base } => {
            ModelPoint::Euclidean(base.iter().map(|b| b + rng.gen_range(-scale..scale)).collect())
        }
        Space::Hyperbolic { .. } => {
            let r = rng.gen_range(0.0..scale);
            let th = rng.gen_range(0.0..std::f64::consts::TAU);
            ModelPoint::Hyperbolic(hyperbolic::exp_map(
                &hyperbolic::ORIGIN,
                &[r * th.cos(), r * th.sin(), 0.0],
            ))
        }
        Space::Tree { valence } => {
            let depth = rng.gen_range(0..=scale.ceil() as usize);
            let path: Vec<u32> = (0..depth)
                .map(|i| rng.gen_range(0..if i == 0 { *valence } else { valence - 1 }))
                .collect();
            ModelPoint::Tree(TreePoint::new(path, rng.gen_range(0.0..=1.0)))
        }
        Space::Product(l, r) => ModelPoint::product(random_point(l, rng, scale), random_point(r, rng, scale)),
    }
}
