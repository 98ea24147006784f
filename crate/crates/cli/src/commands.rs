use std::path::Path;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use zstructure::bass_serre::{tree_ball, verify_relators as relators, TreeVertex};
use zstructure::compression::{envelope, CompressionMap, HHat, SublinearFn};
use zstructure::graph_of_groups::{GraphOfGroups, DEFAULT_MAX_ELEMENTS};
use zstructure::metric_models::{
    boundary_net, cover_constants, standard_cover, verify_cover, SpaceSpec,
};
use zstructure::nullity_lab::{
    nullity_pipeline, product_space, slope_limit, BoundViolation, CompressChoice, PipelineConfig,
};
use zstructure::obstructions::{
    davis_index as davis_scan, racg_growth, t4_components, t4_contradiction_index, t4_sandwich, Racg,
    DEFAULT_MAX_STATES,
};

use crate::report::{emit, env_limit, read_input, write_file, Failure, Run, Scale};
use crate::{BoundaryArgs, CoverArgs, GraphInput, NullityArgs, Output, WitnessArgs, WitnessKind};

const MAX_ELEMENTS_VAR: &str = "ZSTRUCT_MAX_ELEMENTS";
const MAX_STATES_VAR: &str = "ZSTRUCT_MAX_STATES";

/// The graph and the part of the configuration that identifies it.
fn load_graph(input: &GraphInput) -> Result<(GraphOfGroups, Value), Failure> {
    match &input.graph {
        Some(path) => {
            let text = read_input(path)?;
            let g = GraphOfGroups::from_json(&text)
                .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            Ok((g, json!({ "graph": text })))
        }
        None => {
            let (m, n) = input.bs;
            Ok((GraphOfGroups::baumslag_solitar(m, n)?, json!({ "bs": [m, n] })))
        }
    }
}

fn with(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
        b.extend(e);
    }
    base
}

fn parse_phi(name: &str) -> Result<SublinearFn, Failure> {
    Ok(SublinearFn::parse(name)?)
}

pub fn build_tree(input: &GraphInput, radius: usize, output: &Output) -> Result<(), Failure> {
    let (g, config) = load_graph(input)?;
    let limit = env_limit(MAX_ELEMENTS_VAR, DEFAULT_MAX_ELEMENTS)?;
    // vertex count of a regular tree of the largest valence
    let d = (0..g.vertices().len())
        .filter_map(|v| g.tree_degree(v).to_f64())
        .fold(0.0, f64::max);
    let estimate: f64 = 1.0 + (0..radius).map(|k| d * (d - 1.0).max(1.0).powi(k as i32)).sum::<f64>();
    if estimate > limit as f64 {
        return Err(Failure::Resource(format!(
            "a radius {radius} ball has about {estimate:.0} vertices, above {MAX_ELEMENTS_VAR} = {limit}"
        )));
    }
    let ball = tree_ball(&g, radius);
    let pass = ball.cycle_free && ball.degrees_match;
    let run = Run {
        command: "build-tree",
        config: with(config, json!({ "radius": radius })),
        scale: Scale::default(),
        seed: None,
    };
    emit(
        run,
        output,
        pass,
        &ball,
        || json!({ "cycle_free": ball.cycle_free, "degrees_match": ball.degrees_match }),
        "tree ball has a cycle or a degree mismatch",
    )
}

pub fn verify_relators(input: &GraphInput, output: &Output) -> Result<(), Failure> {
    let (g, config) = load_graph(input)?;
    let rep = relators(&g);
    let pass = rep.all_pass();
    let run = Run {
        command: "verify-relators",
        config,
        scale: Scale::default(),
        seed: None,
    };
    emit(
        run,
        output,
        pass,
        &rep,
        || json!({ "failed_relators": rep.failures(), "failed_tree_edges": rep.tree_edges.iter().filter(|e| !e.pass).collect::<Vec<_>>() }),
        "a relator is not satisfied exactly",
    )
}

#[derive(Serialize)]
struct NullityCounterexample<'a> {
    violations: usize,
    /// violation with the largest fiber diameter relative to its bound
    worst: &'a BoundViolation,
    first: &'a [BoundViolation],
}

pub fn nullity(args: &NullityArgs) -> Result<(), Failure> {
    let (g, config) = load_graph(&args.input)?;
    let compress = match args.compress.trim() {
        "none" => CompressChoice::None,
        name => CompressChoice::Phi(parse_phi(name)?),
    };
    let cube_side = match &args.cube_side {
        Some(s) => Some(
            s.trim()
                .parse::<BigRational>()
                .map_err(|e| Failure::Usage(format!("cube side {s:?}: {e}")))?,
        ),
        None => None,
    };
    let mut cfg = PipelineConfig::new(args.wordlen, compress);
    cfg.cube_side = cube_side;
    cfg.r0 = args.r0;
    cfg.net_resolution = args.net_resolution;
    cfg.cover_radius = args.cover_radius;
    cfg.margin = args.margin;
    cfg.probe_radius = args.probe_radius;
    cfg.max_elements = env_limit(MAX_ELEMENTS_VAR, cfg.max_elements)?;
    let rep = nullity_pipeline(&g, &cfg)?;
    if let Some(path) = &args.csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        for s in &rep.stats {
            w.serialize(s).map_err(|e| Failure::Usage(format!("csv: {e}")))?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::Usage(format!("csv: {e}")))?;
        write_file(path, &bytes)?;
    }
    let run = Run {
        command: "nullity",
        config: with(
            config,
            json!({
                "wordlen": args.wordlen,
                "cube_side": args.cube_side,
                "compress": args.compress,
                "r0": args.r0,
                "net_resolution": args.net_resolution,
                "cover_radius": args.cover_radius,
                "margin": args.margin,
                "probe_radius": args.probe_radius,
                "max_elements": cfg.max_elements,
                "seed": args.seed,
            }),
        ),
        scale: Scale {
            wordlen: Some(args.wordlen),
            net_resolution: Some(args.net_resolution),
            t_max: None,
        },
        seed: Some(args.seed),
    };
    let cert = &rep.certificate;
    emit(
        run,
        &args.output,
        cert.pass,
        &rep,
        || {
            let worst = cert
                .violations
                .iter()
                .max_by(|a, b| (a.fiber_diam / a.fiber_bound).total_cmp(&(b.fiber_diam / b.fiber_bound)))
                .expect("a failed certificate lists a violation");
            NullityCounterexample {
                violations: cert.violations.len(),
                worst,
                first: &cert.violations[..cert.violations.len().min(20)],
            }
        },
        &format!("{} translates exceed their fiber or tree bound", cert.violations.len()),
    )
}

pub fn boundary(args: &BoundaryArgs) -> Result<(), Failure> {
    let (g, config) = load_graph(&args.input)?;
    let phi = parse_phi(&args.phi)?;
    let (d, c) = args.envelope;
    let pair = envelope(&[], Some((d.into(), c.into())))?;
    let map = CompressionMap::euclidean(HHat::log_precomposed(pair, phi), g.rank());
    let xi = TreeVertex::from_path(&g.parse_word(&args.xi)?);
    let eta: Vec<f64> = args
        .eta
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| Failure::Usage(format!("eta {x:?}: {e}"))))
        .collect::<Result<_, _>>()?;
    let mut limits = Vec::new();
    for word in &args.words {
        let w = g.parse_word(word)?;
        for &m in &args.slopes {
            let s = slope_limit(&g, &w, &xi, &eta, m, &map, args.t_max)?;
            limits.push(json!({ "word": word, "limit": s }));
        }
    }
    let bad: Vec<&Value> = limits
        .iter()
        .filter(|l| l["limit"]["error"].as_f64().map_or(true, |e| e > args.tol))
        .collect();
    let pass = bad.is_empty();
    let run = Run {
        command: "boundary",
        config: with(
            config,
            json!({
                "words": args.words,
                "xi": args.xi,
                "eta": args.eta,
                "slopes": args.slopes.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
                "t_max": args.t_max,
                "phi": args.phi,
                "envelope": [d, c],
                "tol": args.tol,
            }),
        ),
        scale: Scale {
            wordlen: None,
            net_resolution: Some(xi.depth()),
            t_max: Some(args.t_max),
        },
        seed: None,
    };
    emit(run, &args.output, pass, &limits, || bad.clone(), "a slope ratio misses its limit")
}

pub fn cover(args: &CoverArgs) -> Result<(), Failure> {
    let (space, config) = match &args.space {
        Some(path) => {
            let text = read_input(path)?;
            let s = SpaceSpec::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            (s, json!({ "space": text }))
        }
        None => {
            let (m, n) = args.bs;
            (product_space(&GraphOfGroups::baumslag_solitar(m, n)?), json!({ "bs": [m, n] }))
        }
    };
    let net = boundary_net(&space, args.net_resolution);
    let cover = standard_cover(&space, &net, args.radius)?;
    let consts = cover_constants(&space, &cover, &net, args.margin)?;
    let refined = boundary_net(&space, 2 * args.net_resolution);
    let check = verify_cover(&space, &cover, &consts, &refined)?;
    let result = json!({
        "space": space.tag(),
        "cover_size": cover.len(),
        "constants": consts,
        "refined_net_size": refined.len(),
        "verification": check,
    });
    let run = Run {
        command: "cover",
        config: with(
            config,
            json!({ "net_resolution": args.net_resolution, "radius": args.radius, "margin": args.margin }),
        ),
        scale: Scale {
            wordlen: None,
            net_resolution: Some(args.net_resolution),
            t_max: None,
        },
        seed: None,
    };
    emit(run, &args.output, check.pass, &result, || check.uncovered.clone(), "refined net has uncovered points")
}

pub fn witness(args: &WitnessArgs) -> Result<(), Failure> {
    match args.kind {
        WitnessKind::T4 => {}
    }
    let phi = parse_phi(&args.phi)?;
    let index = match t4_contradiction_index(&phi, args.c) {
        Ok(i) => i,
        Err(zstructure::obstructions::ObstructionError::Certification(e)) => {
            let run = Run {
                command: "witness",
                config: json!({ "kind": "t4", "phi": args.phi, "c": args.c }),
                scale: Scale::default(),
                seed: None,
            };
            let msg = e.to_string();
            return emit(run, &args.output, false, &json!({ "error": msg }), || json!({ "phi": args.phi, "error": msg }), "φ is not sublinear");
        }
        Err(e) => return Err(e.into()),
    };
    let components = (1..=args.max_radius).map(t4_components).collect::<Result<Vec<_>, _>>()?;
    let sandwich: Vec<_> = (1..=args.sandwich).map(t4_sandwich).collect();
    let pass = components.iter().all(|c| c.matches) && sandwich.iter().all(|s| s.item1 && s.item2 && s.item3);
    let result = json!({
        "index": index,
        "components": components,
        "sandwich": sandwich,
        "note": "quantitative component-count comparison through a bounding ball",
    });
    let run = Run {
        command: "witness",
        config: json!({
            "kind": "t4",
            "phi": args.phi,
            "c": args.c,
            "max_radius": args.max_radius,
            "sandwich": args.sandwich,
        }),
        scale: Scale::default(),
        seed: None,
    };
    emit(run, &args.output, pass, &result, || result.clone(), "enumeration disagrees with the closed form")
}

pub fn growth(racg: &Path, n: usize, output: &Output) -> Result<(), Failure> {
    let text = read_input(racg)?;
    let g = Racg::from_json(&text).map_err(|e| Failure::Usage(format!("{}: {e}", racg.display())))?;
    let limit = env_limit(MAX_STATES_VAR, DEFAULT_MAX_STATES)?;
    let table = racg_growth(&g, n, limit)?;
    let run = Run {
        command: "growth",
        config: json!({ "racg": text, "n": n, "max_states": limit }),
        scale: Scale::default(),
        seed: None,
    };
    let result = json!({ "generators": g.generators, "table": table });
    if table.truncated {
        let mut text = serde_json::to_string_pretty(&result).expect("tables serialize");
        text.push('\n');
        if let Some(p) = &output.out {
            write_file(p, text.as_bytes())?;
        } else {
            print!("{text}");
        }
        return Err(Failure::Resource(format!(
            "stopped at radius {} with more than {limit} normal forms ({MAX_STATES_VAR})",
            table.sphere.len() - 1
        )));
    }
    emit(run, output, true, &result, || Value::Null, "")
}

pub fn davis(k: f64, eps: f64, r: f64, s: u64, phi_name: &str, output: &Output) -> Result<(), Failure> {
    let phi = parse_phi(phi_name)?;
    let index = davis_scan(k, eps, r, s, &phi)?;
    let run = Run {
        command: "davis",
        config: json!({ "k": k, "eps": eps, "r": r, "s": s, "phi": phi_name }),
        scale: Scale::default(),
        seed: None,
    };
    emit(run, output, true, &index, || Value::Null, "")
}
