//! End-to-end acceptance suite. Runs every criterion at its stated size and
//! time limit and prints one PASS/FAIL line per criterion.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Display;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use twisted_bt::action::{
    Cyclic2Action, GroupAction, HoughtonAction, ThompsonFAction, TrivialAction,
};
use twisted_bt::checks::check_relations;
use twisted_bt::complex::{
    build_e, build_ve, e_bound, homology, matching_complex, nu, BuildOptions, HomologyGroup,
};
use twisted_bt::par::Exec;
use twisted_bt::sample::Sampler;
use twisted_bt::words::{factorize, iota0, iota1, rho, FactorAtom};
use twisted_bt::{Brick, Color, Element, Forest, Partition, PointPrefix, Word};

const SEED: u64 = 0x7b7;

type Check = Result<String, String>;

fn err(e: impl Display) -> String {
    e.to_string()
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Err(format!($($arg)*));
        }
    };
}

fn run(n: usize, name: &str, limit: Duration, check: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let result = check();
    let elapsed = start.elapsed();
    let (ok, detail) = match result {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; exceeded time limit")),
        Err(e) => (false, e),
    };
    println!(
        "{} [{n:>2}] {name}: {detail} ({:.2}s, limit {}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    ok
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn relation_suite() -> Check {
    fn one<A: GroupAction>(a: &A, out: &mut Vec<String>) -> Result<(), String> {
        let reports = check_relations(a, 500, SEED, Exec::default()).map_err(err)?;
        for r in &reports {
            ensure!(
                r.passed(),
                "{} failed {}/{} on {}: {:?}",
                r.relation,
                r.failures,
                r.instances,
                a.name(),
                r.first_failure
            );
        }
        out.push(format!("{} 8x500", a.name()));
        Ok(())
    }
    let mut out = Vec::new();
    one(&TrivialAction::new(3).map_err(err)?, &mut out)?;
    one(&Cyclic2Action, &mut out)?;
    one(&ThompsonFAction, &mut out)?;
    one(&HoughtonAction::new(3).map_err(err)?, &mut out)?;
    Ok(format!("all relations hold ({})", out.join(", ")))
}

fn pinwheel() -> Check {
    let c = |i| Color::Index(i);
    let b = |e: &[(u32, &str)]| {
        Brick::from_strs(1, &e.iter().map(|(i, w)| (c(*i), *w)).collect::<Vec<_>>())
    };
    let bricks = vec![
        b(&[(1, "0"), (2, "0"), (3, "0")]),
        b(&[(1, "1"), (2, "1"), (3, "1")]),
        b(&[(1, "0"), (2, "1")]),
        b(&[(2, "0"), (3, "1")]),
        b(&[(1, "1"), (3, "0")]),
    ];
    let p = Partition::new(1, bricks.clone());
    ensure!(
        p.is_partition(),
        "pinwheel is not recognized as a partition"
    );
    ensure!(!p.is_dyadic().map_err(err)?, "pinwheel reported dyadic");
    // Oracle: no color splits the cube without cutting through some brick,
    // so no very elementary expansion can start.
    let straddles = |color: u32| bricks.iter().any(|x| x.word(&c(color)).is_empty());
    ensure!((1..=3).all(straddles), "a clean first cut exists");
    let volume = |bs: &[Brick]| {
        bs.iter()
            .map(|x| 0.5f64.powi(x.depth() as i32))
            .sum::<f64>()
    };
    ensure!(volume(&bricks) == 1.0, "pinwheel volume is not 1");
    let r = p.refine_to_dyadic().map_err(err)?;
    ensure!(
        r.is_partition() && r.is_dyadic().map_err(err)?,
        "refinement is not a dyadic partition"
    );
    ensure!(volume(r.bricks()) == 1.0, "refinement volume is not 1");
    for x in r.bricks() {
        let owners = bricks.iter().filter(|y| x.is_subset_of(y)).count();
        ensure!(
            owners == 1,
            "refined brick {x} lies in {owners} pinwheel bricks"
        );
    }
    Ok(format!(
        "partition, not dyadic, dyadic refinement with {} bricks",
        r.len()
    ))
}

fn spectrum_identity() -> Check {
    let a = TrivialAction::new(4).map_err(err)?;
    let word = "p[(2 3 5),5] • (((x[1] ⊕ id[1]) • x[2]) ⊕ x[3]) • x[4]";
    let h = Word::parse(word).map_err(err)?.evaluate(&a).map_err(err)?;
    let spec = h.spectrum().map_err(err)?;
    let expected: BTreeSet<Color> = (1..=4).map(Color::Index).collect();
    ensure!(spec == expected, "spectrum {spec:?}");
    Ok("Spec = {s,t,u,v}".into())
}

fn cocycle() -> Check {
    fn batch<A: GroupAction>(a: A, n: usize, seed: u64) -> Result<(), String> {
        let mut s = Sampler::new(a.clone(), seed);
        for _ in 0..n {
            let h1 = s.group_element().map_err(err)?;
            let h2 = s.group_element().map_err(err)?;
            let k = s.point(1);
            let lhs = h2
                .compose(&h1)
                .map_err(err)?
                .germinal_twist(&k)
                .map_err(err)?;
            let moved = h1.apply_point(&k).map_err(err)?;
            let rhs = a.multiply(
                &h2.germinal_twist(&moved).map_err(err)?,
                &h1.germinal_twist(&k).map_err(err)?,
            );
            ensure!(lhs == rhs, "cocycle fails for {h1} / {h2} at {k}");
        }
        Ok(())
    }
    batch(Cyclic2Action, 250, SEED)?;
    batch(ThompsonFAction, 250, SEED + 1)?;
    batch(HoughtonAction::new(3).map_err(err)?, 250, SEED + 2)?;
    batch(TrivialAction::new(3).map_err(err)?, 250, SEED + 3)?;
    Ok("1000 triples".into())
}

fn factorization() -> Check {
    fn batch<A: GroupAction>(a: A, n: usize, seed: u64) -> Result<usize, String> {
        let mut s = Sampler::new(a.clone(), seed);
        let color = a.orbit_representatives().unwrap()[0];
        let mut atoms = 0;
        for _ in 0..n {
            let h = s.group_element().map_err(err)?;
            let fw = factorize(&h, color).map_err(err)?;
            ensure!(
                fw.evaluate().map_err(err)? == h,
                "recomposition differs for {h}"
            );
            for atom in &fw.atoms {
                if let FactorAtom::Sv(e) = atom {
                    let set = e.germinal_twist_set();
                    ensure!(
                        set.len() == 1 && set.contains(&a.identity()),
                        "twisted SV atom {e}"
                    );
                }
            }
            atoms += fw.atoms.len();
        }
        Ok(atoms)
    }
    let c2 = batch(Cyclic2Action, 200, SEED)?;
    let f = batch(ThompsonFAction, 50, SEED + 1)?;
    Ok(format!("250 elements recomposed ({} atoms)", c2 + f))
}

fn rho_properties() -> Check {
    fn batch<A: GroupAction>(a: A, seed: u64) -> Result<(), String> {
        let mut s = Sampler::new(a.clone(), seed);
        let gens = a.generators().unwrap();
        let atoms: Vec<A::Elem> = gens.iter().flat_map(|g| [g.clone(), a.invert(g)]).collect();
        let color = a.orbit_representatives().unwrap()[0];
        for _ in 0..34 {
            let g = s.group_elem();
            ensure!(
                rho(&iota0(&a, g.clone()), None).map_err(err)? == g,
                "rho(iota0(g)) != g"
            );
        }
        for _ in 0..167 {
            let h = s.group_element().map_err(err)?;
            let r = rho(&h, None).map_err(err)?;
            let x = atoms.choose(s.rng()).unwrap().clone();
            let left = iota0(&a, x.clone()).compose(&h).map_err(err)?;
            ensure!(
                rho(&left, None).map_err(err)? == a.multiply(&x, &r),
                "property (1) fails for {h}"
            );
            let local = iota1(&a, color, x.clone())
                .map_err(err)?
                .compose(&h)
                .map_err(err)?;
            let got = rho(&local, None).map_err(err)?;
            ensure!(
                got == r || got == a.multiply(&x, &r),
                "property (2) fails for {h}"
            );
            let hp = s.untwisted(1, 1).map_err(err)?;
            let moved = hp.compose(&h).map_err(err)?;
            ensure!(
                rho(&moved, None).map_err(err)? == r,
                "property (3) fails for {h}"
            );
        }
        Ok(())
    }
    batch(Cyclic2Action, SEED)?;
    batch(ThompsonFAction, SEED + 1)?;
    batch(HoughtonAction::new(3).map_err(err)?, SEED + 2)?;
    Ok("rho∘iota0 = id on 102 samples, properties (1)-(3) on 501 instances".into())
}

/// Dyadic partitions of `C^S(m)` with at most `max` bricks, by splitting.
fn dyadic_partitions(m: usize, colors: &[Color], max: usize) -> Vec<Vec<Brick>> {
    let start: Vec<Brick> = (1..=m).map(Brick::whole).collect();
    let mut seen: BTreeSet<Vec<Brick>> = [start.clone()].into_iter().collect();
    let mut frontier = vec![start];
    while let Some(p) = frontier.pop() {
        if p.len() >= max {
            continue;
        }
        for i in 0..p.len() {
            for c in colors {
                let (lo, hi) = p[i].split(*c);
                let mut q = p.clone();
                q[i] = lo;
                q.push(hi);
                q.sort();
                if seen.insert(q.clone()) {
                    frontier.push(q);
                }
            }
        }
    }
    seen.into_iter().collect()
}

/// Upper bounds of `f1` and `f2` reached from `f1` by splitting only bricks
/// that no brick of `f2` contains.
fn upper_bounds(f1: &[Brick], f2: &[Brick], colors: &[Color]) -> Vec<Vec<Brick>> {
    let inside = |b: &Brick| f2.iter().any(|c| b.is_subset_of(c));
    let mut start = f1.to_vec();
    start.sort();
    let mut seen: HashSet<Vec<Brick>> = [start.clone()].into_iter().collect();
    let mut frontier = vec![start];
    let mut out = Vec::new();
    while let Some(p) = frontier.pop() {
        let Some(i) = p.iter().position(|b| !inside(b)) else {
            out.push(p);
            continue;
        };
        // Only colors along which an overlapping target brick is deeper.
        let useful = |c: &Color| {
            f2.iter()
                .any(|t| t.intersects(&p[i]) && t.word(c).len() > p[i].word(c).len())
        };
        for c in colors.iter().filter(|c| useful(c)) {
            let (lo, hi) = p[i].split(*c);
            let mut q = p.clone();
            q[i] = lo;
            q.push(hi);
            q.sort();
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    out
}

/// Elementary dyadic partitions of one cube, per cube index.
fn elementary_options(cube: usize, colors: &[Color]) -> Vec<Vec<Brick>> {
    dyadic_partitions(1, colors, 1 << colors.len())
        .into_iter()
        .filter(|p| p.iter().all(Brick::is_elementary))
        .map(|p| p.into_iter().map(|b| b.with_cube(cube)).collect())
        .collect()
}

fn lattice_and_core() -> Check {
    let a = TrivialAction::new(2).map_err(err)?;
    let colors = a.finite_colors().unwrap();
    let forest =
        |m: usize, leaves: &[Brick]| Forest::from_leaves(a, m, leaves.to_vec()).map_err(err);
    let mut joins = 0;
    let mut cores = 0;
    for m in 1..=2 {
        let parts = dyadic_partitions(m, &colors, 4);
        let forests: Vec<Forest<TrivialAction>> = parts
            .iter()
            .map(|p| forest(m, p))
            .collect::<Result<_, _>>()?;
        let pairs: Vec<(usize, usize)> = (0..parts.len())
            .flat_map(|i| (0..parts.len()).map(move |j| (i, j)))
            .collect();
        let per_pair = Exec::default().map(&pairs, |&(i, j)| -> Result<(bool, bool), String> {
            let (f1, f2) = (&forests[i], &forests[j]);
            let mut joined = false;
            if i <= j {
                let join = f1.join(f2).map_err(err)?;
                let bounds = upper_bounds(&parts[i], &parts[j], &colors);
                let least = bounds
                    .iter()
                    .min_by_key(|b| b.len())
                    .ok_or("no upper bound found")?;
                let least = forest(m, least)?;
                for b in &bounds {
                    let u = forest(m, b)?;
                    ensure!(
                        least.element().coset_leq(u.element()).map_err(err)?,
                        "brute-force bound is not least"
                    );
                }
                ensure!(
                    join.element().coset_eq(least.element()).map_err(err)?,
                    "join differs from brute-force least upper bound"
                );
                joined = true;
            }
            let (v, w) = (f1.element(), f2.element());
            if !v.coset_leq(w).map_err(err)? || v.coset_eq(w).map_err(err)? {
                return Ok((joined, false));
            }
            // Every elementary expansion of v, kept when it stays below w.
            let r = v.rank();
            let options: Vec<Vec<Vec<Brick>>> =
                (1..=r).map(|k| elementary_options(k, &colors)).collect();
            let mut best: Vec<Element<TrivialAction>> = Vec::new();
            let mut idx = vec![0usize; r];
            loop {
                let leaves: Vec<Brick> = idx
                    .iter()
                    .enumerate()
                    .flat_map(|(k, &o)| options[k][o].clone())
                    .collect();
                let e = forest(r, &leaves)?;
                let u = e.element().compose(v).map_err(err)?;
                if u.coset_leq(w).map_err(err)? {
                    best.push(u);
                }
                let mut k = 0;
                while k < r {
                    idx[k] += 1;
                    if idx[k] < options[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == r {
                    break;
                }
            }
            let top = best
                .iter()
                .max_by_key(|u| u.rank())
                .ok_or("no elementary expansion")?;
            for u in &best {
                ensure!(
                    u.coset_leq(top).map_err(err)?,
                    "no maximum elementary expansion"
                );
            }
            let core = v.elementary_core(w).map_err(err)?;
            ensure!(
                core.coset_eq(top).map_err(err)?,
                "core differs from brute-force maximum"
            );
            ensure!(!core.coset_eq(v).map_err(err)?, "core equals v");
            Ok((joined, true))
        });
        for outcome in per_pair {
            let (j, c) = outcome?;
            joins += j as usize;
            cores += c as usize;
        }
    }
    Ok(format!(
        "{joins} joins and {cores} cores checked exhaustively"
    ))
}

fn spectrum_stabilizer() -> Check {
    let a = HoughtonAction::new(3).map_err(err)?;
    let mut s = Sampler::new(a, SEED);
    let (mut fixed, mut attempts) = (0, 0);
    while fixed < 200 {
        attempts += 1;
        ensure!(
            attempts < 200_000,
            "only {fixed} pointwise-fixing pairs found"
        );
        let leaves = s.rng().gen_range(2..=5);
        let f = s.tree(leaves).map_err(err)?.into_element();
        let g = s.group_elem();
        if a.is_identity(&g) {
            continue;
        }
        let spec = f.spectrum().map_err(err)?;
        if !spec
            .iter()
            .all(|c| a.apply(&g, c).map(|d| d == *c).unwrap_or(false))
        {
            continue;
        }
        let ft = f.compose(&Element::twist(a, g)).map_err(err)?;
        ensure!(ft.coset_eq(&f).map_err(err)?, "[f τ] != [f] for {f}");
        fixed += 1;
    }
    let (mut stable, mut moving, mut attempts) = (0, 0, 0);
    while stable < 200 {
        attempts += 1;
        ensure!(attempts < 200_000, "only {stable} coset-fixing pairs found");
        let leaves = s.rng().gen_range(2..=5);
        let f = s.tree(leaves).map_err(err)?.into_element();
        let spec = f.spectrum().map_err(err)?;
        let g = if s.rng().gen_bool(0.5) && spec.len() >= 2 {
            let ray = |c: &Color| match c {
                Color::Ray(r, k) => Some((*r, *k)),
                _ => None,
            };
            let picks: Vec<&Color> = spec
                .iter()
                .collect::<Vec<_>>()
                .choose_multiple(s.rng(), 2)
                .copied()
                .collect();
            let (x, y) = (ray(picks[0]).unwrap(), ray(picks[1]).unwrap());
            a.element(vec![0; 3], [(x, y), (y, x)]).map_err(err)?
        } else {
            s.group_elem()
        };
        let ft = f.compose(&Element::twist(a, g.clone())).map_err(err)?;
        if !ft.coset_eq(&f).map_err(err)? {
            continue;
        }
        let image: BTreeSet<Color> = spec
            .iter()
            .map(|c| a.apply(&g, c))
            .collect::<Result<_, _>>()
            .map_err(err)?;
        ensure!(image == spec, "γ does not stabilize Spec(f) for {f}");
        if spec.iter().any(|c| a.apply(&g, c).ok() != Some(*c)) {
            moving += 1;
        }
        stable += 1;
    }
    Ok(format!(
        "{fixed} pointwise-fixing pairs, {stable} coset-fixing pairs ({moving} permute Spec)"
    ))
}

fn table(groups: &[HomologyGroup]) -> String {
    groups
        .iter()
        .map(|g| format!("H{}={g}", g.degree))
        .collect::<Vec<_>>()
        .join(" ")
}

fn matching_shadow() -> Check {
    let mut out = Vec::new();
    for m in 4..=9usize {
        let c = matching_complex(m).map_err(err)?;
        let bound = nu(m as i64) - 1;
        let h = homology(&c, bound.max(0) as usize).map_err(err)?;
        for g in &h {
            if (g.degree as i64) <= bound {
                ensure!(
                    g.is_trivial(),
                    "matching complex m={m}: {} in degree {}",
                    g,
                    g.degree
                );
            }
        }
        out.push(format!("m={m}: {}", table(&h)));
    }
    Ok(out.join("; "))
}

fn ve_e_shadow() -> Check {
    let mut out = Vec::new();
    let mut checked = 0;
    for k in [1u32, 2] {
        let a = TrivialAction::new(k).map_err(err)?;
        for m in 2..=6usize {
            let ve_bound = nu(m as i64) - 1;
            let e_bnd = e_bound(m);
            for (kind, bound) in [("VE", ve_bound), ("E", e_bnd)] {
                let top = bound.max(0) as usize;
                let opts = BuildOptions {
                    max_dim: Some(top + 1),
                    ..BuildOptions::default()
                };
                let built = if kind == "VE" {
                    build_ve(m, &a, &opts)
                } else {
                    build_e(m, &a, &opts)
                }
                .map_err(err)?;
                let h = homology(&built.complex, top).map_err(err)?;
                for g in &h {
                    if (g.degree as i64) <= bound {
                        ensure!(
                            g.is_trivial(),
                            "{kind}_{m} with |S|={k}: {g} in degree {}",
                            g.degree
                        );
                        checked += 1;
                    }
                }
                out.push(format!(
                    "|S|={k} {kind}_{m} ({} vertices, bound {bound}): {}",
                    built.vertices.len(),
                    table(&h)
                ));
            }
        }
    }
    Ok(format!("{checked} degree checks; {}", out.join("; ")))
}

fn commutator() -> Check {
    fn batch<A: GroupAction>(a: A, n: usize, seed: u64) -> Result<usize, String> {
        let mut s = Sampler::new(a.clone(), seed);
        let color = a.orbit_representatives().unwrap()[0];
        let (outside, inside) = Brick::whole(1).split(color);
        let mut probes_in = 0;
        for _ in 0..n {
            let g = loop {
                let g = s.group_elem();
                if !a.is_identity(&g) {
                    break g;
                }
            };
            // f ∈ SV with f(B) a proper subset of B.
            let k = s.rng().gen_range(1..=3);
            let l = s.rng().gen_range(2..=4);
            let dom_in = s.partition_of(&inside, k);
            let mut dom_out = s.partition_of(&outside, l);
            let mut ran_in = s.partition_of(&inside, k + 1);
            let mut ran_out = s.partition_of(&outside, l - 1);
            dom_out.shuffle(s.rng());
            ran_in.shuffle(s.rng());
            ran_out.shuffle(s.rng());
            let gap = ran_in[k].clone();
            let mut pieces = Vec::new();
            for (d, r) in dom_in.into_iter().zip(ran_in.iter().take(k)) {
                pieces.push(twisted_bt::Piece {
                    domain: d,
                    range: r.clone(),
                    twist: a.identity(),
                });
            }
            let mut rest = dom_out.into_iter();
            pieces.push(twisted_bt::Piece {
                domain: rest.next().unwrap(),
                range: gap.clone(),
                twist: a.identity(),
            });
            for (d, r) in rest.zip(ran_out) {
                pieces.push(twisted_bt::Piece {
                    domain: d,
                    range: r,
                    twist: a.identity(),
                });
            }
            let f = Element::new(a.clone(), 1, 1, pieces).map_err(err)?;
            let f_inv = f.inverse();
            let i = iota1(&a, color, g.clone()).map_err(err)?;
            let comm = i
                .compose(&f)
                .and_then(|x| x.compose(&i.inverse()))
                .and_then(|x| x.compose(&f_inv))
                .map_err(err)?;
            let mut probes: Vec<PointPrefix> = (0..16).map(|_| s.point(1)).collect();
            probes.extend((0..4).map(|_| s.point_in(&gap)));
            for p in probes {
                let in_b = p.lies_in(&inside);
                let in_fb = f_inv.apply_point(&p).map_err(err)?.lies_in(&inside);
                let expected = if in_b && !in_fb {
                    g.clone()
                } else {
                    a.identity()
                };
                probes_in += (in_b && !in_fb) as usize;
                ensure!(
                    comm.germinal_twist(&p).map_err(err)? == expected,
                    "commutator twist wrong at {p} for f = {f}"
                );
            }
        }
        Ok(probes_in)
    }
    let mut probes = batch(Cyclic2Action, 34, SEED)?;
    probes += batch(ThompsonFAction, 33, SEED + 1)?;
    probes += batch(HoughtonAction::new(3).map_err(err)?, 33, SEED + 2)?;
    Ok(format!("100 commutators, {probes} probes in B∖f(B)"))
}

fn main() {
    let results = [
        run(1, "relation suite", secs(60), relation_suite),
        run(2, "non-dyadic partition", secs(1), pinwheel),
        run(3, "spectrum identity", secs(1), spectrum_identity),
        run(4, "germinal-twist cocycle", secs(30), cocycle),
        run(5, "factorization", secs(120), factorization),
        run(6, "quasi-retraction properties", secs(30), rho_properties),
        run(7, "joins and elementary cores", secs(120), lattice_and_core),
        run(8, "spectrum and stabilizers", secs(60), spectrum_stabilizer),
        run(9, "matching complex homology", secs(300), matching_shadow),
        run(10, "VE_m and E_m homology", secs(600), ve_e_shadow),
        run(11, "commutator germinal twists", secs(60), commutator),
    ];
    let passed = results.iter().filter(|r| **r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
