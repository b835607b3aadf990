use cliquepart::bounds::{known_cp, known_cp_table, phi_ceiling_u64, theorem2_bound};
use cliquepart::combin::{binom, for_each_combination};
use cliquepart::conics::{build_conic_design, conics_through_point, enumerate_conics, is_arc, projective_points};
use cliquepart::curves::{build_curves, coverage_census, pairwise_intersection_check};
use cliquepart::design::{
    derive_link, partition_stats, read_design, render_design, verify_coverage, write_design, Design, Mode,
};
use cliquepart::field::FieldSpec;
use cliquepart::inversive::{
    build_inversive, circle_solution_count, unique_circle_through, verify_axioms, AxiomConfig, CircleKind,
};
use cliquepart::search::{certify_with_witness, greedy_complete, solve_cp, SearchConfig};
use cliquepart::witt::{build_golay, build_s843, intersection_sizes, octad_designs};
use cliquepart::zarankiewicz::{incidence_graph, verify_lemma7};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Σ|C| = Σ_v |P_v*| and, for partitions, Σ C(|C|, r) = C(n, r).
fn check_identities(d: &Design, is_partition: bool) {
    let stats = partition_stats(d);
    let link_total: u64 = if d.n() <= 60 && d.r() >= 2 {
        (0..d.n() as u32).map(|v| derive_link(d, v).unwrap().design.len() as u64).sum()
    } else {
        d.point_degrees().iter().map(|&x| x as u64).sum()
    };
    assert_eq!(stats.sum_sizes, link_total, "{}", d.label());
    if is_partition {
        assert_eq!(stats.sum_r_binomials, binom(d.n() as u64, d.r() as u64), "{}", d.label());
    }
}

#[test]
fn inversive_point_degrees() {
    for q in [3u64, 7, 11] {
        let m = build_inversive(q).unwrap();
        assert!(m.circles().point_degrees().iter().all(|&k| k as u64 == q * (q + 1)), "q={q}");
    }
}

#[test]
fn circle_sizes_by_brute_force() {
    for q in [7u64, 11] {
        let f = FieldSpec::of_order(q).unwrap();
        for a in f.elements() {
            for b in f.elements() {
                for l in f.nonzero_elements() {
                    assert_eq!(circle_solution_count(&f, a, b, l), q + 1);
                }
            }
        }
    }
    let f = FieldSpec::of_order(27).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..100 {
        let a = f.elem(rng.gen_range(0..27));
        let b = f.elem(rng.gen_range(0..27));
        let l = f.elem(rng.gen_range(1..27));
        assert_eq!(circle_solution_count(&f, a, b, l), 28);
    }
}

#[test]
fn unique_circle_matches_scan_q7() {
    let m = build_inversive(7).unwrap();
    let d = m.circles();
    let mut owner = std::collections::HashMap::new();
    for (i, b) in d.blocks().iter().enumerate() {
        for_each_combination(b, 3, |t| {
            owner.insert(t.to_vec(), i);
        });
    }
    let pts: Vec<u32> = (0..49).collect();
    let mut checked = 0;
    for_each_combination(&pts, 3, |t| {
        let p = |i: u32| m.point_coords(i).unwrap();
        let hit = unique_circle_through(&m, p(t[0]), p(t[1]), p(t[2])).unwrap();
        assert_eq!(hit.id, owner[&t.to_vec()]);
        assert_eq!(m.kinds()[hit.id], hit.kind);
        checked += 1;
    });
    assert_eq!(checked, 18424);
}

#[test]
fn lines_meet_circles_in_at_most_two_points() {
    for q in [3u64, 7] {
        let m = build_inversive(q).unwrap();
        let blocks = m.circles().blocks();
        let kinds = m.kinds();
        for (i, c) in blocks.iter().enumerate() {
            if !matches!(kinds[i], CircleKind::Finite { .. }) {
                continue;
            }
            for (j, l) in blocks.iter().enumerate() {
                if matches!(kinds[j], CircleKind::Finite { .. }) {
                    continue;
                }
                let common = c.iter().filter(|x| l.binary_search(x).is_ok()).count();
                assert!(common <= 2, "q={q}");
            }
        }
    }
}

#[test]
fn links_of_q3_plane() {
    let m = build_inversive(3).unwrap();
    let d = m.circles();
    for v in 0..d.n() as u32 {
        let link = derive_link(d, v).unwrap();
        assert!(verify_coverage(&link.design, Mode::Partition).unwrap().is_partition, "v={v}");
        check_identities(&link.design, true);
    }
    let at_inf = derive_link(d, m.infinity()).unwrap().design;
    assert_eq!(at_inf.len(), 12);
    assert_eq!(at_inf.n(), 9);
    assert!(at_inf.blocks().iter().all(|b| b.len() == 3));
}

#[test]
fn q7_axioms_and_determinism() {
    let m = build_inversive(7).unwrap();
    let rep = verify_axioms(&m, &AxiomConfig::default()).unwrap();
    assert!(rep.all_hold());
    assert!(!rep.sampled);
    assert_eq!(rep.census.covered_once, 19600);
    assert_eq!(render_design(m.circles()), render_design(build_inversive(7).unwrap().circles()));
}

#[test]
fn identities_on_generated_partitions() {
    for q in [3u64, 7] {
        check_identities(build_inversive(q).unwrap().circles(), true);
    }
    check_identities(&build_s843().unwrap(), true);
    let o = octad_designs(&build_golay().unwrap()).unwrap();
    for d in [&o.s24, &o.s23, &o.s22] {
        check_identities(d, true);
    }
    for r in 2..=6 {
        check_identities(&solve_cp(&SearchConfig::new(r + 1, r)).unwrap().certificate, true);
    }
    // packings satisfy the handshake identity too
    check_identities(build_curves(4, 3).unwrap().design(), false);
}

#[test]
fn curve_interpolation_uniqueness() {
    for (q, r) in [(3u64, 3usize), (4, 3), (5, 3), (4, 4), (5, 4), (5, 5)] {
        let fam = build_curves(q, r).unwrap();
        let c = coverage_census(&fam).unwrap();
        assert!(c.matches_closed_form, "q={q} r={r}: {c:?}");
        assert_eq!(c.multicovered, 0);
        assert!(pairwise_intersection_check(&fam) < r);
        assert!(fam.design().blocks().iter().all(|b| b.len() == q as usize));
        assert_eq!(render_design(fam.design()), render_design(build_curves(q, r).unwrap().design()));
    }
    let c = coverage_census(&build_curves(5, 3).unwrap()).unwrap();
    assert_eq!(c.uncovered, 1050);
    assert_eq!(c.leading_order_uncovered, 1562.5);
}

#[test]
fn conic_structure() {
    for q in [3u64, 5, 7] {
        let conics = enumerate_conics(q).unwrap();
        let f = FieldSpec::of_order(q).unwrap();
        assert!(conics.iter().all(|c| c.points.len() as u64 == q + 1 && is_arc(&f, &c.points)));
        let npts = projective_points(&f).len() as u32;
        let mut total = 0;
        for p in 0..npts {
            let k = conics_through_point(&conics, p).len() as u64;
            assert_eq!(k, q.pow(4) - q * q, "q={q} p={p}");
            total += k;
        }
        assert_eq!(total, (q.pow(5) - q * q) * (q + 1));
    }
    for q in [5u64, 7] {
        for r in [4usize, 5] {
            let cd = build_conic_design(q, r).unwrap();
            assert!(cd.census.is_packing, "q={q} r={r}");
            assert!(cd.matches_formula, "q={q} r={r}");
        }
    }
}

#[test]
fn octad_structure() {
    let o = octad_designs(&build_golay().unwrap()).unwrap();
    assert_eq!(intersection_sizes(&o.s24), vec![0, 2, 4]);
    let link = derive_link(&o.s24, 23).unwrap().design;
    assert_eq!(link.sorted_blocks(), o.s23.sorted_blocks());
    for d in [&o.s24, &o.s23, &o.s22, &build_s843().unwrap()] {
        assert_eq!(d.len() as u64, phi_ceiling_u64(d.n() as u64, d.r() as u64).unwrap(), "{}", d.label());
    }
}

#[test]
fn incidence_graphs_and_lemma7() {
    let ip3 = build_inversive(3).unwrap();
    let g = incidence_graph(ip3.circles());
    assert_eq!((g.m(), g.n(), g.edge_count()), (30, 10, 120));
    let empty = Design::new(5, 2, vec![], "").unwrap();
    assert_eq!(incidence_graph(&empty).edge_count(), 0);

    let rep = verify_lemma7(ip3.circles()).unwrap();
    assert!(rep.exact && rep.km == 120);
    let rep = verify_lemma7(build_inversive(7).unwrap().circles()).unwrap();
    assert!(rep.exact && rep.km == 2800);
    let o = octad_designs(&build_golay().unwrap()).unwrap();
    let rep = verify_lemma7(&o.s22).unwrap();
    assert!(rep.meets && rep.km == 462);
}

#[test]
fn known_table_has_witnesses_and_bounds() {
    let o = octad_designs(&build_golay().unwrap()).unwrap();
    let s22 = o.s22.clone();
    // S(22,6,3) with point 21 deleted still partitions the triples of 0..21
    let s22_minus = Design::new(
        21,
        3,
        s22.blocks().iter().map(|b| b.iter().copied().filter(|&x| x != 21).collect()).collect(),
        "s22 minus a point",
    )
    .unwrap();
    for k in known_cp_table() {
        let witness = match (k.n, k.r) {
            (8, 3) => build_s843().unwrap(),
            (22, 3) => s22.clone(),
            (23, 4) => o.s23.clone(),
            (24, 5) => o.s24.clone(),
            (21, 3) => s22_minus.clone(),
            (n, r) => solve_cp(&SearchConfig::new(n as usize, r as usize)).unwrap().certificate,
        };
        assert!(verify_coverage(&witness, Mode::Partition).unwrap().is_partition);
        assert_eq!(witness.len() as u64, k.cp, "({}, {})", k.n, k.r);
        let lower = if (k.n, k.r) == (21, 3) {
            theorem2_bound(21, 3, 21).unwrap()
        } else {
            phi_ceiling_u64(k.n, k.r).unwrap()
        };
        assert_eq!(lower, k.cp, "({}, {})", k.n, k.r);
    }
    assert_eq!(known_cp(9, 2), Some(9));
}

#[test]
fn witness_certification_and_greedy() {
    let cert = certify_with_witness(&build_s843().unwrap()).unwrap();
    assert!(cert.optimal && cert.blocks == 14);
    let g = greedy_complete(build_curves(3, 3).unwrap().design()).unwrap();
    assert_eq!((g.original_blocks, g.added_blocks, g.total_blocks), (27, 57, 84));
    assert!(verify_coverage(&g.design, Mode::Partition).unwrap().is_partition);
}

#[test]
fn search_respects_phi() {
    for (n, r) in [(4, 3), (5, 3), (6, 3), (5, 2), (7, 2), (6, 4)] {
        let res = solve_cp(&SearchConfig::new(n, r)).unwrap();
        assert!(res.proven_optimal);
        assert!(res.optimum >= phi_ceiling_u64(n as u64, r as u64).unwrap());
        assert!(verify_coverage(&res.certificate, Mode::Partition).unwrap().is_partition);
    }
}

#[test]
fn coverage_report_json_keys() {
    let d = build_curves(3, 3).unwrap().into_design();
    let rep = verify_coverage(&d, Mode::Partition).unwrap();
    let v = serde_json::to_value(&rep).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        ["covered_once", "is_packing", "is_partition", "multicovered", "total_rsets", "uncovered", "violation_samples"]
    );
    assert_eq!(v["violation_samples"].as_array().unwrap().len(), 20);
    assert_eq!(v["violation_samples"][0], serde_json::json!([0, 1, 2]));
}

#[test]
fn design_files_on_disk() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("s843.design");
    let d = build_s843().unwrap();
    write_design(&d, &file).unwrap();
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.starts_with("cliquepart-design v1\nn=8 r=3 label=\"steiner s843\"\n"));
    assert!(text.ends_with('\n') && !text.contains('\r'));
    assert_eq!(read_design(&file).unwrap(), d);

    let bad = dir.path().join("bad.design");
    std::fs::write(&bad, "cliquepart-design v1\nn=4 r=3 label=\"x\"\n# comment\n\n0 2 1\n").unwrap();
    assert!(matches!(read_design(&bad), Err(cliquepart::Error::Parse { line: 5, .. })));
    std::fs::write(&bad, "cliquepart-design v1\nn=4 r=3 label=\"x\"\n0 1 2 3\n").unwrap();
    assert!(matches!(read_design(&bad), Err(cliquepart::Error::InvariantViolation { .. })));
}
