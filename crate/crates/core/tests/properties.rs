use proptest::prelude::*;
use proptest::sample::select;

use morse_orbits::analysis::{analyze, check_properties, Analysis, AnalysisOptions};
use morse_orbits::corpus;
use morse_orbits::graphaut::{h1_subgraph, prune_in_order};
use morse_orbits::homology::{h1_basis, smith_oracle};
use morse_orbits::io::{parse_field_for, parse_mesh, write_field, write_mesh_json, write_off};
use morse_orbits::orbitcalc::{minimal_graph, minimal_graph_with};
use morse_orbits::plmorse::{Codomain, ScalarField};
use morse_orbits::surface::{validate_surface, TriSurface};
use morse_orbits::value::Value;

fn surface(i: usize) -> TriSurface {
    let v = |t: Vec<[usize; 3]>| validate_surface(&t).unwrap();
    match i {
        0 => v(corpus::octahedron_triangles()),
        1 => v(corpus::bipyramid_triangles(8)),
        2 => v(corpus::polar_disk_triangles(6, 3)),
        3 => corpus::annulus_grid(6, 3).surface(),
        4 => v(corpus::csaszar_torus_triangles()),
        5 => corpus::torus_grid(4, 4).surface(),
        6 => corpus::mobius_grid(6, 3).surface(),
        7 => v(corpus::rp2_triangles()),
        _ => corpus::klein_grid(4, 4).surface(),
    }
}

fn quick() -> AnalysisOptions {
    AnalysisOptions { homology: false, ..Default::default() }
}

type Summary = (String, String, String, Option<String>, (usize, usize, usize), usize, usize);

fn summary(a: &Analysis) -> Summary {
    (
        a.report.orbit.to_string(),
        a.report.orbit_f.to_string(),
        a.report.stabilizer_id.to_string(),
        a.report.k.map(|k| k.to_string()),
        a.morse.counts(),
        a.graph.node_count(),
        a.graph.edge_count(),
    )
}

fn relabel(s: &TriSurface, f: &ScalarField, perm: &[usize]) -> (TriSurface, ScalarField) {
    let tris: Vec<[usize; 3]> = s.triangles().iter().map(|t| [perm[t[0]], perm[t[1]], perm[t[2]]]).collect();
    let mut values = vec![Value::zero(); f.len()];
    for (v, &p) in perm.iter().enumerate() {
        values[p] = f.value(v).clone();
    }
    (TriSurface::new(s.vertex_count(), tris).unwrap(), ScalarField::new(f.codomain(), values))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn accepted_fields_satisfy_every_property(i in 0usize..9, seed in 0u64..10_000) {
        let s = surface(i);
        let f = corpus::random_field(&s, seed);
        if let Ok(a) = analyze(&s, &f, AnalysisOptions::default()) {
            prop_assert_eq!(check_properties(&a), Vec::<String>::new());
        }
    }

    #[test]
    fn report_ignores_vertex_labels(i in 0usize..9, seed in 0u64..10_000, shuffle in any::<u64>()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let s = surface(i);
        let f = corpus::random_field(&s, seed);
        let mut perm: Vec<usize> = (0..s.vertex_count()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(shuffle));
        let (s2, f2) = relabel(&s, &f, &perm);
        match (analyze(&s, &f, quick()), analyze(&s2, &f2, quick())) {
            (Ok(a), Ok(b)) => prop_assert_eq!(summary(&a), summary(&b)),
            (Err(a), Err(b)) => prop_assert_eq!(a.kind(), b.kind()),
            _ => prop_assert!(false, "acceptance differs after relabeling"),
        }
    }

    #[test]
    fn report_ignores_increasing_affine_maps(i in 0usize..9, seed in 0u64..10_000, scale in 1i64..50, shift in -100i64..100) {
        let s = surface(i);
        let f = corpus::random_field(&s, seed);
        let g = f.map_values(|v| v.mul(&Value::ratio(scale, 7)).add(&Value::from_int(shift)));
        match (analyze(&s, &f, quick()), analyze(&s, &g, quick())) {
            (Ok(a), Ok(b)) => prop_assert_eq!(summary(&a), summary(&b)),
            (Err(a), Err(b)) => prop_assert_eq!(a.kind(), b.kind()),
            _ => prop_assert!(false, "acceptance differs after rescaling"),
        }
    }

    #[test]
    fn contraction_order_does_not_matter(i in 0usize..9, seed in 0u64..10_000, choices in prop::collection::vec(any::<usize>(), 32)) {
        let s = surface(i);
        let f = corpus::random_field(&s, seed);
        if let Ok(a) = analyze(&s, &f, quick()) {
            if a.morse.is_simple {
                let reference = minimal_graph(&a.graph).unwrap();
                let mut it = choices.iter().cycle();
                let other = minimal_graph_with(&a.graph, |n| it.next().unwrap() % n);
                prop_assert_eq!((reference.r_c, reference.r_e), (other.r_c, other.r_e));
                prop_assert_eq!(reference.contractions(), other.contractions());
            }
        }
    }

    #[test]
    fn h1_subgraph_does_not_depend_on_pruning_order(i in 0usize..9, seed in 0u64..10_000, choices in prop::collection::vec(any::<usize>(), 64)) {
        let s = surface(i);
        let f = corpus::random_field(&s, seed);
        if let Ok(a) = analyze(&s, &f, quick()) {
            if a.graph.cycle_rank() > 0 || a.class.boundary_count > 0 {
                let mut it = choices.iter().cycle();
                let other = prune_in_order(&a.graph, |c| c[it.next().unwrap() % c.len()]);
                prop_assert_eq!(h1_subgraph(&a.graph), other);
            }
        }
    }

    #[test]
    fn h1_rank_matches_smith_normal_form(i in 0usize..9, picks in prop::collection::vec(any::<prop::sample::Index>(), 0..4)) {
        let s = surface(i);
        let interior: Vec<usize> = (0..s.vertex_count()).filter(|&v| !s.is_boundary_vertex(v)).collect();
        let mut punctures: Vec<usize> = picks.iter().map(|ix| interior[ix.index(interior.len())]).collect();
        punctures.sort_unstable();
        punctures.dedup();
        if let Ok(basis) = h1_basis(&s, &punctures) {
            let (free, _) = smith_oracle(&basis);
            prop_assert_eq!(basis.rank(), free);
        }
    }

    #[test]
    fn mesh_and_field_files_round_trip(i in 0usize..9, seed in 0u64..1000, json in any::<bool>()) {
        let s = surface(i);
        let text = if json { write_mesh_json(&s) } else { write_off(&s) };
        let back = parse_mesh(&text).unwrap();
        prop_assert_eq!(back.triangles(), s.triangles());
        let f = corpus::random_field(&s, seed);
        prop_assert_eq!(parse_field_for(&write_field(&f), Codomain::Real, &back).unwrap(), f);
    }

    #[test]
    fn exact_values_round_trip(num in -10_000i64..10_000, den in 1i64..500, form in select(vec!["frac", "display"])) {
        let v = Value::ratio(num, den);
        let text = if form == "frac" { format!("{num}/{den}") } else { v.to_string() };
        prop_assert_eq!(text.parse::<Value>().unwrap(), v);
    }
}
