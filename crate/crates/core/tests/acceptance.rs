//! One line per acceptance criterion. Runs without the libtest harness so
//! the verdicts are always printed.

mod oracle;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use oracle::{lower_envelope, q, simplex_corrections, stars_and_bars, Simplex, Q};
use toric_picard::cone::{dual_cone, validate_fan, vectors, ConeCollection, Fan};
use toric_picard::constructions::{
    delta_lstar_vertices_wps, reflexive_simplex_check, triangulate_refinement, weighted_projective, DiagonalGroup,
    WeightSystem,
};
use toric_picard::divisor::{
    convexity, epigraph_cone, picard_basis_toric, section_basis, section_polytope, Convexity, RhoClass, Section,
};
use toric_picard::lattice::{int, IntVector, RationalVector};
use toric_picard::picard::{
    fan_polytope, maximal_ray_set, picard_anticanonical, picard_hypersurface, prop6_certificate, Correction, Verdict,
};
use toric_picard::polytope::{delta_lstar_rho, dual_polytope, hull_of_ints, Polytope};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn ints(v: &IntVector) -> Vec<i64> {
    v.entries().iter().map(|x| x.to_i64().unwrap()).collect()
}

fn fan(n: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Fan {
    validate_fan(n, vectors(rays), cones.iter().map(|c| c.to_vec()).collect()).unwrap()
}

fn p1() -> Fan {
    fan(1, &[&[1], &[-1]], &[&[0], &[1]])
}

fn p2() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[2, 0]])
}

fn p4() -> Fan {
    weighted_projective(&WeightSystem::new(vec![1; 5]).unwrap()).unwrap().fan
}

fn hirzebruch(a: i64) -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[-1, a], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]])
}

/// Rays `e1, e2, e1+e2, -e1-e2`.
fn refined_p2() -> Fan {
    fan(2, &[&[1, 0], &[0, 1], &[1, 1], &[-1, -1]], &[&[0, 2], &[2, 1], &[1, 3], &[3, 0]])
}

fn rho(xs: &[i64]) -> RhoClass {
    RhoClass::from_i64s(xs).unwrap()
}

fn octic_fan() -> Fan {
    let w = weighted_projective(&WeightSystem::new(vec![1, 1, 2, 2, 2]).unwrap()).unwrap();
    let rays = maximal_ray_set(&fan_polytope(&w.fan).unwrap()).unwrap();
    triangulate_refinement(&w.fan.to_collection(), &rays).unwrap()
}

fn mirror_vertices() -> Vec<IntVector> {
    vectors(&[&[4, -1, -1, -1], &[-1, 4, -1, -1], &[-1, -1, 4, -1], &[-1, -1, -1, 4], &[-1, -1, -1, -1]])
}

/// Face fan of the 126-point simplex refined by `rays`.
fn mirror_fan(rays: &[IntVector]) -> Fan {
    let base = ConeCollection {
        ambient: 4,
        rays: mirror_vertices(),
        cones: (0..5).map(|skip| (0..5).filter(|&j| j != skip).collect()).collect(),
    };
    triangulate_refinement(&base, rays).unwrap()
}

fn vertex_set(p: &Polytope) -> BTreeSet<RationalVector> {
    p.vertices().iter().cloned().collect()
}

fn generic_total(fan: &Fan) -> Result<(usize, Vec<Correction>), String> {
    let r = rho(&vec![1; fan.rays().len()]);
    let s = Section::generic_full(fan, &r).map_err(|e| e.to_string())?;
    let rep = picard_hypersurface(fan, &r, &s).map_err(|e| e.to_string())?;
    Ok((rep.total_rank, rep.corrections))
}

/// Compare library corrections against the simplex oracle, face by face.
fn corrections_match(fan: &Fan, vertices: &[Vec<i64>], corrections: &[Correction]) -> Result<(), String> {
    let oracle = simplex_corrections(vertices);
    ensure(corrections.len() == oracle.per_face.len(), "codim-2 face count differs")?;
    for c in corrections {
        let mut face: Vec<usize> = c
            .face_rays
            .iter()
            .filter_map(|&i| vertices.iter().position(|v| *v == ints(&fan.rays()[i])))
            .collect();
        face.sort();
        let (f, g) = oracle.per_face.get(&face).ok_or(format!("face {face:?} unknown to the oracle"))?;
        ensure(
            c.face_points.len() == *f && c.dual_points.len() == *g,
            format!("face {face:?}: library {}x{}, oracle {f}x{g}", c.face_points.len(), c.dual_points.len()),
        )?;
    }
    Ok(())
}

fn c1_p1_sections() -> Check {
    for k in 1..=10i64 {
        for l in 1..=10i64 {
            let pts: Vec<i64> = section_basis(&p1(), &rho(&[k, l])).unwrap().iter().map(|p| ints(p)[0]).collect();
            let expect: Vec<i64> = (-k..=l).collect();
            ensure(pts == expect, format!("k={k} l={l}: {pts:?}"))?;
        }
    }
    Ok("100 classes, basis = Z in [-k, l]".into())
}

fn c2_p1_interior() -> Check {
    for k in 1..=10i64 {
        for l in 1..=10i64 {
            let p = section_polytope(&p1(), &rho(&[k, l])).unwrap();
            let interior = p.relative_interior_lattice_points().len() as i64;
            ensure(interior + 1 == k + l, format!("k={k} l={l}: {interior} interior points"))?;
        }
    }
    Ok("|Int| + 1 = k + l on 100 classes".into())
}

fn c3_toric_ranks() -> Check {
    let cases = [("P1", p1(), 1), ("P2", p2(), 1), ("P4", p4(), 1), ("Hirzebruch", hirzebruch(1), 2)];
    for (name, f, expect) in cases {
        let r = picard_basis_toric(&f).unwrap().rank;
        ensure(r == expect && r == f.rays().len() - f.lattice_rank(), format!("{name}: rank {r}"))?;
    }
    let mut wps = 0;
    for m in 2..=5usize {
        for w in oracle::box_points(&vec![1; m], &vec![4; m]) {
            let Ok(ws) = WeightSystem::new(w.clone()) else { continue };
            let r = picard_basis_toric(&weighted_projective(&ws).unwrap().fan).unwrap().rank;
            ensure(r == 1, format!("P{w:?}: rank {r}"))?;
            wps += 1;
        }
    }
    Ok(format!("4 named fans and {wps} weighted projective spaces"))
}

fn c4_wps_vertices() -> Check {
    for w in [vec![1, 1, 1, 1, 1], vec![1, 1, 2, 2, 2]] {
        let ws = WeightSystem::new(w.clone()).unwrap();
        let f = weighted_projective(&ws).unwrap().fan;
        let ones = vec![int(1); w.len()];
        let formula = delta_lstar_vertices_wps(&ws, &ones).unwrap();
        let cone = dual_cone(&epigraph_cone(&f, &rho(&vec![1; w.len()])).unwrap().cone).unwrap();
        let direct: BTreeSet<_> = vertex_set(&delta_lstar_rho(&cone).unwrap());
        let from_formula: BTreeSet<_> = formula.vertices.iter().cloned().collect();
        ensure(direct == from_formula, format!("{w:?}: vertex sets differ"))?;
        let total: i64 = w.iter().sum();
        for (j, row) in formula.presentation.iter().enumerate() {
            for (i, a) in row.iter().enumerate() {
                let expect = if i == j { Q::new(total - w[j], w[j]) } else { q(-1) };
                let got = Q::new(a.numer().to_i64().unwrap(), a.denom().to_i64().unwrap());
                ensure(got == expect, format!("{w:?}: a[{j}][{i}] = {got}, expected {expect}"))?;
                let pairing = formula.vertices[j].dot(&f.rays()[i].to_rational());
                ensure(&pairing == a, format!("{w:?}: a[{j}][{i}] is not <delta_i, v_j>"))?;
            }
        }
    }
    Ok("(1,1,1,1,1) and (1,1,2,2,2) agree".into())
}

fn c5_integrality() -> Check {
    let systems: Vec<Vec<i64>> =
        oracle::box_points(&[1; 4], &[4; 4]).into_iter().filter(|w| WeightSystem::new(w.clone()).is_ok()).collect();
    let rhos: Vec<Vec<i64>> = oracle::box_points(&[0; 4], &[3; 4]).into_iter().filter(|r| r.iter().any(|&x| x > 0)).collect();
    let cases: usize = systems
        .par_iter()
        .map(|w| {
            let f = weighted_projective(&WeightSystem::new(w.clone()).unwrap()).unwrap().fan;
            for r in &rhos {
                let s: i64 = r.iter().zip(w).map(|(a, b)| a * b).sum();
                let arithmetic = w.iter().all(|n| s % n == 0);
                let integral = section_polytope(&f, &rho(r)).unwrap().is_integral();
                ensure(integral == arithmetic, format!("w={w:?} rho={r:?}: integral={integral}"))?;
            }
            Ok(rhos.len())
        })
        .sum::<Result<usize, String>>()?;
    Ok(format!("{cases} (weights, rho) pairs"))
}

fn c6_reflexive() -> Check {
    let quintic = hull_of_ints(p4().rays()).unwrap();
    ensure(quintic.is_reflexive().unwrap(), "quintic simplex not reflexive")?;
    let w = weighted_projective(&WeightSystem::new(vec![1, 1, 1, 1, 3]).unwrap()).unwrap();
    ensure(!hull_of_ints(w.fan.rays()).unwrap().is_reflexive().unwrap(), "(1,1,1,1,3) reflexive")?;
    let mut systems = Vec::new();
    for w in oracle::box_points(&[1; 5], &[8; 5]) {
        if w.windows(2).all(|p| p[0] <= p[1]) && WeightSystem::new(w.clone()).is_ok() {
            systems.push(w);
        }
    }
    let agree = systems
        .par_iter()
        .map(|w| {
            let ws = WeightSystem::new(w.clone()).unwrap();
            let check = reflexive_simplex_check(&ws, &DiagonalGroup::scalars(&ws), false).unwrap();
            let geometric = hull_of_ints(weighted_projective(&ws).unwrap().fan.rays()).unwrap().is_reflexive().unwrap();
            ensure(check.pass == geometric, format!("{w:?}: check {} vs hull {geometric}", check.pass))
        })
        .collect::<Result<Vec<()>, String>>()?;
    let reflexive = systems.iter().filter(|w| w.iter().all(|n| w.iter().sum::<i64>() % n == 0)).count();
    Ok(format!("{} sorted weight systems, {reflexive} reflexive", agree.len()))
}

fn c7_quintic() -> Check {
    let f = p4();
    let a = picard_anticanonical(&f).map_err(|e| e.to_string())?;
    let (b, corr) = generic_total(&f)?;
    let verts: Vec<Vec<i64>> = f.rays().iter().map(ints).collect();
    let oracle = simplex_corrections(&verts);
    ensure(a.total_rank == 1 && b == 1, format!("totals {} and {b}", a.total_rank))?;
    ensure(oracle.total == 0 && f.rays().len() - 4 + oracle.total == 1, "oracle disagrees")?;
    corrections_match(&f, &verts, &a.corrections)?;
    corrections_match(&f, &verts, &corr)?;
    Ok("total rank 1 on both paths; 10 faces, all empty".into())
}

fn c8_mirror() -> Check {
    let delta = hull_of_ints(&mirror_vertices()).unwrap();
    let verts: Vec<Vec<i64>> = mirror_vertices().iter().map(ints).collect();
    let oracle = simplex_corrections(&verts);
    let all = Simplex::from_ints(&verts);
    let boundary = all.points.iter().filter(|(_, l)| Simplex::facets_through(l) >= 1).count();
    let facet_interior = all.points.iter().filter(|(_, l)| Simplex::facets_through(l) == 1).count();
    ensure(all.points.len() as u64 == stars_and_bars(5, 5), "126-point count")?;
    ensure(boundary == 125 && facet_interior == 20, format!("boundary {boundary}, facet interiors {facet_interior}"))?;
    let rays = maximal_ray_set(&delta).unwrap();
    ensure(rays.len() == 105 && rays.len() == boundary - facet_interior, format!("{} maximal rays", rays.len()))?;
    let oracle_rays: BTreeSet<Vec<i64>> = oracle.maximal_rays.iter().cloned().collect();
    ensure(rays.iter().map(ints).collect::<BTreeSet<_>>() == oracle_rays, "maximal ray sets differ")?;
    let f = mirror_fan(&rays);
    let rep = picard_anticanonical(&f).map_err(|e| e.to_string())?;
    ensure(rep.toric_rank == 101 && rep.total_rank == 101, format!("rank {}", rep.total_rank))?;
    ensure(oracle.total == 0, "oracle correction nonzero")?;
    corrections_match(&f, &verts, &rep.corrections)?;
    Ok(format!("105 rays, {} cones, total rank 101", f.max_cones().len()))
}

fn c9_octic() -> Check {
    let f = octic_fan();
    let a = picard_anticanonical(&f).map_err(|e| e.to_string())?;
    let (b, corr) = generic_total(&f)?;
    let w = weighted_projective(&WeightSystem::new(vec![1, 1, 2, 2, 2]).unwrap()).unwrap();
    let verts: Vec<Vec<i64>> = w.fan.rays().iter().map(ints).collect();
    let oracle = simplex_corrections(&verts);
    ensure(oracle.maximal_rays.len() == f.rays().len(), "ray count differs from oracle")?;
    let expect = f.rays().len() - 4 + oracle.total;
    ensure(expect == 2, format!("oracle total {expect}"))?;
    ensure(a.total_rank == 2 && b == 2, format!("totals {} and {b}", a.total_rank))?;
    ensure(a.corrections == corr, "paths disagree face by face")?;
    corrections_match(&f, &verts, &a.corrections)?;
    Ok(format!("total rank 2 = {} rays - 4 + {}", f.rays().len(), oracle.total))
}

/// Rays, probe sets `S` with `f(sum S) = sum rho_S`, and the fan itself.
fn probes(f: &Fan) -> Vec<Vec<usize>> {
    let mut out = BTreeSet::new();
    for c in f.max_cones() {
        for k in 1..=c.len() {
            for s in oracle::subsets(c.len(), k) {
                out.insert(s.iter().map(|&i| c[i]).collect::<Vec<_>>());
            }
        }
    }
    out.into_iter().collect()
}

fn convex_by_probes(f: &Fan, r: &[i64]) -> bool {
    let rays: Vec<Vec<i64>> = f.rays().iter().map(ints).collect();
    probes(f).iter().all(|s| {
        let x: Vec<i64> = (0..f.lattice_rank()).map(|k| s.iter().map(|&i| rays[i][k]).sum()).collect();
        let fx: i64 = s.iter().map(|&i| r[i]).sum();
        lower_envelope(&rays, r, &x) == q(fx)
    })
}

fn c10_convexity() -> Check {
    let fixtures = [
        (rho(&[1, 1, 1, 1]), Convexity::StrictlyConvex),
        (rho(&[1, 1, 2, 1]), Convexity::Convex),
        (rho(&[1, 1, 3, 1]), Convexity::NotConvex),
    ];
    for (r, expect) in &fixtures {
        let got = convexity(&refined_p2(), r).unwrap();
        ensure(got == *expect, format!("refined P2 {:?}: {got:?}", r.coeffs()))?;
    }
    let fans = vec![
        p2(),
        refined_p2(),
        hirzebruch(0),
        hirzebruch(1),
        hirzebruch(2),
        fan(2, &[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1]], &[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 5], &[5, 0]]),
        fan(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1]], &[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]]),
        fan(
            3,
            &[&[1, 0, 0], &[-1, 0, 0], &[0, 1, 0], &[0, -1, 0], &[0, 0, 1], &[0, 0, -1]],
            &[&[0, 2, 4], &[0, 2, 5], &[0, 3, 4], &[0, 3, 5], &[1, 2, 4], &[1, 2, 5], &[1, 3, 4], &[1, 3, 5]],
        ),
        fan(
            3,
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[-1, -1, -1], &[1, 1, 1]],
            &[&[0, 1, 4], &[0, 2, 4], &[1, 2, 4], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]],
        ),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut convex, mut trials) = (0, 0);
    while trials < 200 {
        let f = &fans[trials % fans.len()];
        let r: Vec<i64> = (0..f.rays().len()).map(|_| rng.gen_range(0..=4)).collect();
        if r.iter().all(|&x| x == 0) {
            continue;
        }
        let lib = convexity(f, &rho(&r)).unwrap() != Convexity::NotConvex;
        ensure(lib == convex_by_probes(f, &r), format!("fan {} rho {r:?}: library says {lib}", trials % fans.len()))?;
        convex += lib as usize;
        trials += 1;
    }
    Ok(format!("3 fixtures; 200 random classes, {convex} convex"))
}

fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    let mut g: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            g.swap(i, (i + 1) % n);
            continue;
        }
        let c = rng.gen_range(-2..=2);
        for k in 0..n {
            g[i][k] += c * g[j][k];
        }
    }
    g
}

/// Apply `g` to every ray and shuffle the ray order.
fn transform(f: &Fan, g: &[Vec<i64>], rng: &mut ChaCha8Rng) -> Fan {
    let n = f.lattice_rank();
    let mut order: Vec<usize> = (0..f.rays().len()).collect();
    order.shuffle(rng);
    let mut position = vec![0; order.len()];
    for (k, &i) in order.iter().enumerate() {
        position[i] = k;
    }
    let rays: Vec<IntVector> = order
        .iter()
        .map(|&i| {
            let r = ints(&f.rays()[i]);
            IntVector::from_i64s(&(0..n).map(|a| (0..n).map(|b| g[a][b] * r[b]).sum()).collect::<Vec<i64>>())
        })
        .collect();
    let cones = f.max_cones().iter().map(|c| c.iter().map(|&i| position[i]).collect()).collect();
    validate_fan(n, rays, cones).unwrap()
}

fn invariants(f: &Fan) -> Vec<usize> {
    let n = f.lattice_rank();
    let ones = rho(&vec![1; f.rays().len()]);
    let mut out = vec![picard_basis_toric(f).unwrap().rank, section_basis(f, &ones).unwrap().len()];
    if n == 4 {
        out.push(picard_anticanonical(f).unwrap().total_rank);
        out.push(generic_total(f).unwrap().0);
    }
    out
}

fn c11_involution() -> Check {
    let reflexive: Vec<Vec<IntVector>> = vec![
        p2().rays().to_vec(),
        vectors(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]),
        vectors(&[&[1, 0], &[1, 1], &[0, 1], &[-1, 0], &[-1, -1], &[0, -1]]),
        p4().rays().to_vec(),
        mirror_vertices(),
        weighted_projective(&WeightSystem::new(vec![1, 1, 2, 2, 2]).unwrap()).unwrap().fan.rays().to_vec(),
        vectors(&[&[1, 0, 0, 0], &[-1, 0, 0, 0], &[0, 1, 0, 0], &[0, -1, 0, 0], &[0, 0, 1, 0], &[0, 0, -1, 0], &[0, 0, 0, 1], &[0, 0, 0, -1]]),
    ];
    for pts in &reflexive {
        let p = hull_of_ints(pts).unwrap();
        let back = dual_polytope(&dual_polytope(&p).unwrap()).unwrap();
        ensure(vertex_set(&p) == vertex_set(&back), format!("(P*)* != P for {pts:?}"))?;
    }
    let fixtures = [p2(), hirzebruch(1), refined_p2(), p4(), octic_fan()];
    let expected: Vec<Vec<usize>> = fixtures.iter().map(invariants).collect();
    ensure(expected[3] == vec![1, 126, 1, 1] && expected[4][2] == 2, format!("baseline {expected:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in 0..20 {
        for (f, e) in fixtures.iter().zip(&expected) {
            let g = random_unimodular(f.lattice_rank(), &mut rng);
            let moved = transform(f, &g, &mut rng);
            ensure(&invariants(&moved) == e, format!("transform {t}: {:?} vs {e:?}", invariants(&moved)))?;
        }
    }
    Ok(format!("{} dual pairs; 20 transforms x {} fans", reflexive.len(), fixtures.len()))
}

fn c12_certificates() -> Check {
    let c = prop6_certificate(&p4()).unwrap();
    ensure(c.verdict == Verdict::SmoothCy, format!("quintic: {c:?}"))?;
    let rays = maximal_ray_set(&hull_of_ints(&mirror_vertices()).unwrap()).unwrap();
    let c = prop6_certificate(&mirror_fan(&rays)).unwrap();
    ensure(c.verdict == Verdict::SmoothCy, format!("mirror: {:?}", c.verdict))?;
    let vertices = mirror_vertices();
    let dropped = rays.iter().find(|r| !vertices.contains(r)).unwrap().clone();
    let fewer: Vec<IntVector> = rays.iter().filter(|r| **r != dropped).cloned().collect();
    let c = prop6_certificate(&mirror_fan(&fewer)).unwrap();
    ensure(
        c.verdict == Verdict::NotCertified && c.missing_rays == vec![dropped.clone()],
        format!("mirror minus {dropped:?}: {:?}, missing {:?}", c.verdict, c.missing_rays),
    )?;
    Ok(format!("dropping {dropped:?} is reported"))
}

fn main() {
    let criteria: [(&str, Duration, fn() -> Check); 12] = [
        ("P1 section basis is Z in [-k, l]", Duration::from_secs(1), c1_p1_sections),
        ("P1 interior count identity", Duration::from_secs(1), c2_p1_interior),
        ("toric Picard rank d - n", Duration::from_secs(1), c3_toric_ranks),
        ("weighted projective vertex formula", Duration::from_secs(1), c4_wps_vertices),
        ("integrality iff n_j divides sum rho_k n_k", Duration::from_secs(30), c5_integrality),
        ("reflexive simplices and the divisibility check", Duration::from_secs(60), c6_reflexive),
        ("quintic Picard rank", Duration::from_secs(1), c7_quintic),
        ("mirror quintic", Duration::from_secs(10), c8_mirror),
        ("octic in P(1,1,2,2,2)", Duration::from_secs(30), c9_octic),
        ("convexity against probe points", Duration::from_secs(10), c10_convexity),
        ("duality involution and basis invariance", Duration::from_secs(30), c11_involution),
        ("smoothness certificates", Duration::from_secs(10), c12_certificates),
    ];
    let mut failed = 0;
    for (i, (name, limit, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (verdict, detail) = match outcome {
            Ok(d) if elapsed <= *limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; too slow")),
            Err(e) => ("FAIL", e),
        };
        failed += (verdict == "FAIL") as usize;
        println!(
            "criterion {:>2}: {verdict} {name} ({:.3} s, limit {} s): {detail}",
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
