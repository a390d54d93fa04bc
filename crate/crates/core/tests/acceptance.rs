//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs as a plain binary (`harness = false`), so the report is always printed.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{p_parts, random_invertible_f2, random_unimodular, smith_invariants};
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rootdatum::catalog::{self, di4_coroot_enumeration, get_str, list_entries};
use rootdatum::classify::f2module::{natural_module, permutation_module, sum_zero_module, ModuleSignature};
use rootdatum::classify::{
    check_isomorphism, fingerprint, identify_weyl_pair, invariant_degrees, is_isomorphic, krull_schmidt,
    steenrod_decide, structure_decomposition, F2Matrix, F2Module, IsoVerdict, SteenrodMode,
};
use rootdatum::cli;
use rootdatum::exact_linear::{cokernel_structure, Matrix, Scalar};
use rootdatum::root_datum::{subgroup_elements, RootDatum, TorusElement};

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn primes() -> [u64; 3] {
    [2, 3, 5]
}

// 1 ------------------------------------------------------------------------

fn axiom_suite() -> Result<String, String> {
    let start = Instant::now();
    let mut count = 0;
    for p in primes() {
        for key in list_entries(4, p) {
            let d = ok(catalog::get(&key))?;
            let report = ok(d.verify())?;
            ensure!(report.ok(), "{key} fails: {:?}", report.failures());
            count += 1;
        }
    }
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(60), "took {t:?}");
    Ok(format!("{count} data verified in {:.1}s", t.as_secs_f64()))
}

// 2 ------------------------------------------------------------------------

fn cartan(kind: char, r: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; r]; r];
    for i in 0..r {
        c[i][i] = 2;
        if i + 1 < r {
            c[i][i + 1] = -1;
            c[i + 1][i] = -1;
        }
    }
    match kind {
        'A' => {}
        'B' => c[r - 1][r - 2] = -2,
        'C' => c[r - 2][r - 1] = -2,
        'G' => c = vec![vec![2, -1], vec![-3, 2]],
        'F' => c = vec![vec![2, -1, 0, 0], vec![-1, 2, -2, 0], vec![0, -1, 2, -1], vec![0, 0, -1, 2]],
        _ => unreachable!(),
    }
    c
}

/// `(π₁, center)` from the Cartan matrix: the simply connected form has
/// `π₁ = 0` and center `coker C`, the adjoint form the reverse.
fn oracle(kind: char, r: usize, simply_connected: bool, p: u64) -> (Vec<i64>, Vec<i64>) {
    let inv = p_parts(&smith_invariants(&cartan(kind, r)), p as i64);
    if simply_connected {
        (vec![], inv)
    } else {
        (inv, vec![])
    }
}

fn invariant_table() -> Result<String, String> {
    let mut rows: Vec<(String, char, usize, bool)> = Vec::new();
    for n in 2..=5 {
        rows.push((format!("SU({n})"), 'A', n - 1, true));
        rows.push((format!("PU({n})"), 'A', n - 1, false));
    }
    rows.push(("Sp(1)".into(), 'A', 1, true));
    for n in 2..=3 {
        rows.push((format!("Sp({n})"), 'C', n, true));
        rows.push((format!("PSp({n})"), 'C', n, false));
    }
    rows.push(("Spin(5)".into(), 'C', 2, true));
    for n in [3, 4] {
        rows.push((format!("Spin({})", 2 * n + 1), 'B', n, true));
    }
    rows.push(("SO(3)".into(), 'A', 1, false));
    for n in 2..=4 {
        rows.push((format!("SO({})", 2 * n + 1), 'B', n, false));
    }
    rows.push(("G2".into(), 'G', 2, true));
    rows.push(("F4".into(), 'F', 4, true));
    let mut checked = 0;
    for p in [2u64, 3] {
        for (name, kind, r, sc) in &rows {
            let key = format!("{name}@{p}");
            let d = ok(get_str(&key))?;
            let (pi1, center) = oracle(*kind, *r, *sc, p);
            let got_pi1 = ok(d.fundamental_group())?;
            let got_center = ok(d.center())?.group;
            let as_i64 = |v: Vec<num_bigint::BigInt>| v.iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>();
            ensure!(got_pi1.free_rank == 0 && got_center.free_rank == 0, "{key}: unexpected free part");
            ensure!(as_i64(got_pi1.invariant_factors()) == pi1, "{key}: π₁ {got_pi1} vs {pi1:?}");
            ensure!(as_i64(got_center.invariant_factors()) == center, "{key}: center {got_center} vs {center:?}");
            checked += 1;
        }
    }
    // frozen classical values
    let frozen: [(&str, Vec<i64>, Vec<i64>); 6] = [
        ("PU(4)@2", vec![4], vec![]),
        ("Spin(7)@2", vec![], vec![2]),
        ("SU(3)@3", vec![], vec![3]),
        ("PU(5)@5", vec![5], vec![]),
        ("SO(7)@2", vec![2], vec![]),
        ("Sp(3)@3", vec![], vec![]),
    ];
    for (key, pi1, center) in frozen {
        let d = ok(get_str(key))?;
        let a: Vec<i64> = ok(d.fundamental_group())?.invariant_factors().iter().map(|x| x.to_i64().unwrap()).collect();
        let b: Vec<i64> = ok(d.center())?.group.invariant_factors().iter().map(|x| x.to_i64().unwrap()).collect();
        ensure!(a == pi1 && b == center, "{key}: π₁ {a:?} center {b:?}");
    }
    for n in 2..=5 {
        for p in [2u64, 3, 5] {
            ensure!(ok(ok(get_str(&format!("PU({n})@{p}")))?.center())?.is_trivial(), "PU({n})@{p} center");
        }
    }
    Ok(format!("{checked} (datum, prime) rows match the Smith-form oracle"))
}

// 3 ------------------------------------------------------------------------

fn sp_spin() -> Result<String, String> {
    let sp = ok(get_str("Sp(3)@2"))?;
    let spin = ok(get_str("Spin(7)@2"))?;
    let field = match ok(is_isomorphic(&sp, &spin))? {
        IsoVerdict::NotIsomorphic { field: Some(f), .. } => f,
        other => return Err(format!("p = 2: expected a named fingerprint difference, got {other:?}")),
    };
    let out = cli::run(["rootdatum", "iso", "Sp(3)@2", "Spin(7)@2", "--json"]);
    ensure!(out.code == 0, "cli exit {}", out.code);
    let v: serde_json::Value = ok(serde_json::from_str(&out.stdout))?;
    ensure!(v["verdict"] == false && v["differing_field"] == field, "cli output {}", out.stdout);

    let sp = ok(get_str("Sp(3)@3"))?;
    let spin = ok(get_str("Spin(7)@3"))?;
    let v = ok(is_isomorphic(&sp, &spin))?;
    let w = v.witness().ok_or("p = 3: no witness")?;
    ensure!(ok(check_isomorphism(&sp, &spin, w))?, "p = 3: witness rejected");
    let out = cli::run(["rootdatum", "iso", "Sp(3)@3", "Spin(7)@3"]);
    ensure!(out.code == 0 && out.stdout.starts_with("isomorphic: true"), "cli: {}", out.stdout);
    Ok(format!("p=2 differs in {field}; p=3 witness verified"))
}

// 4 ------------------------------------------------------------------------

fn di4() -> Result<String, String> {
    let start = Instant::now();
    let d = ok(get_str("DI4@2"))?;
    let w = d.weyl();
    ensure!(w.order() == 336, "|W| = {}", w.order());
    ensure!(w.reflections().len() == 21, "{} reflections", w.reflections().len());
    ensure!(w.reflection_classes().len() == 1, "{} classes", w.reflection_classes().len());
    let deg = invariant_degrees(w);
    ensure!(deg == vec![4, 6, 14], "degrees {deg:?}");
    ensure!(deg.iter().product::<usize>() == 336 && deg.iter().map(|x| x - 1).sum::<usize>() == 21, "Shephard–Todd");
    ensure!(ok(d.fixed_lattice())?.rank() == 0, "nontrivial fixed lattice");
    ensure!(ok(d.fundamental_group())?.is_trivial(), "π₁ ≠ 0");
    ensure!(ok(d.center())?.is_trivial(), "Ż ≠ 0");

    let minus = Matrix::identity(3).neg();
    ensure!(w.contains(&minus), "−1 ∉ W");
    let reduce = |m: &Matrix| -> Result<F2Matrix, String> {
        let mut bits = Vec::new();
        for x in m.entries() {
            bits.push(ok(x.residue(2, 1))? == 1.into());
        }
        Ok(F2Matrix::from_fn(3, 3, |i, j| bits[i * 3 + j]))
    };
    let mut image = HashSet::new();
    let mut special = HashSet::new();
    let mut special_count = 0;
    for g in w.elements() {
        let r = reduce(g)?;
        if g.determinant() == Scalar::one() {
            special_count += 1;
            special.insert(r.clone());
        }
        image.insert(r);
    }
    // W = {±1} × S with S = ker det mapping isomorphically onto GL₃(𝔽₂)
    ensure!(minus.determinant() == Scalar::from_int(-1), "det(−1)");
    ensure!(special_count == 168 && special.len() == 168, "det-one subgroup: {special_count} elements, {} images", special.len());
    ensure!(image.len() == 168, "mod-2 image has order {}", image.len());
    let m = F2Module::new(3, w.generators().iter().map(reduce).collect::<Result<_, _>>()?).map_err(|e| e.to_string())?;
    let names: Vec<String> = ok(identify_weyl_pair(&m, &[], 0))?.into_iter().map(|f| f.name).collect();
    ensure!(names == vec!["G2".to_string()], "mod-2 image identified as {names:?}");

    let e = ok(di4_coroot_enumeration())?;
    ensure!(e.valid == 1, "{} valid coroot structures out of {}", e.valid, e.candidates);
    let t = start.elapsed();
    ensure!(t < Duration::from_secs(120), "took {t:?}");
    Ok(format!("{} candidate coroot structures, 1 valid; {:.1}s", e.candidates, t.as_secs_f64()))
}

// 5 ------------------------------------------------------------------------

fn as_i64s(v: &[num_bigint::BigInt]) -> Vec<i64> {
    v.iter().map(|x| x.to_i64().unwrap()).collect()
}

/// Invariant factors of `Z/⟨A⟩` for the finite part `Z` of the center,
/// by discrete logarithms in `Z` and a Smith form.
fn center_quotient_oracle(d: &RootDatum, a: &[TorusElement]) -> Result<Vec<i64>, String> {
    let c = ok(d.center())?;
    let (n, p) = (d.rank(), d.p());
    let orders = as_i64s(&c.group.invariant_factors());
    let mut table = Vec::new();
    let total: i64 = orders.iter().product();
    for idx in 0..total {
        let mut rem = idx;
        let mut coords = Vec::new();
        let mut t = TorusElement::zero(n, p);
        for (g, &o) in c.generators.iter().zip(&orders) {
            let k = rem % o;
            rem /= o;
            coords.push(k);
            t = ok(t.add(&ok(g.mul_int(&k.into()))?))?;
        }
        table.push((t, coords));
    }
    let mut rel: Vec<Vec<i64>> = Vec::new();
    for (i, &o) in orders.iter().enumerate() {
        let mut r = vec![0; orders.len()];
        r[i] = o;
        rel.push(r);
    }
    for x in a {
        let (_, coords) = table.iter().find(|(t, _)| t == x).ok_or(format!("{x} is not central"))?;
        rel.push(coords.clone());
    }
    if orders.is_empty() {
        return Ok(vec![]);
    }
    Ok(p_parts(&smith_invariants(&rel), p as i64))
}

fn same_up_to_iso(a: &RootDatum, b: &RootDatum) -> Result<bool, String> {
    match ok(is_isomorphic(a, b))? {
        IsoVerdict::Isomorphic { witness, .. } => ok(check_isomorphism(a, b, &witness)),
        _ => Ok(false),
    }
}

fn laws(d: &RootDatum, a: &[TorusElement], label: &str) -> Result<(), String> {
    let q = ok(d.quotient(a))?;
    let zq = ok(q.center())?.group;
    ensure!(zq.free_rank == ok(d.center())?.corank(), "{label}: corank changed");
    let expect = center_quotient_oracle(d, a)?;
    ensure!(as_i64s(&zq.invariant_factors()) == expect, "{label}: center(D/A) = {zq}, expected {expect:?}");
    let uq = ok(q.universal_cover())?;
    let ud = ok(d.universal_cover())?;
    ensure!(same_up_to_iso(&uq, &ud)?, "{label}: universal covers differ");
    ensure!(ok(uq.fundamental_group())?.is_finite_trivial(), "{label}: π₁(D̃) ≠ 0");
    let adj = ok(q.adjoint())?;
    ensure!(ok(adj.center())?.group.is_finite_trivial(), "{label}: adjoint has finite center");
    let n = q.rank();
    let basis: Vec<_> = Matrix::identity(n).row_vectors();
    ensure!(ok(ok(q.cover(&basis))?.same_as(&q))?, "{label}: cover(D, π₁) ≠ D");
    ensure!(ok(ok(q.cover(&[]))?.same_as(&uq))?, "{label}: cover(D, 0) ≠ D̃");
    Ok(())
}

fn quotient_laws() -> Result<String, String> {
    let mut count = 0;
    let mut pool = Vec::new();
    for p in [2u64, 3] {
        for key in list_entries(4, p) {
            let d = ok(catalog::get(&key))?;
            let z = ok(d.center())?;
            laws(&d, &[], &format!("{key}/0"))?;
            count += 1;
            if !z.group.is_finite_trivial() {
                laws(&d, &z.generators, &format!("{key}/Z"))?;
                count += 1;
                pool.push((key, d, z));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for s in 0..50 {
        let (key, d, z) = &pool[rng.gen_range(0..pool.len())];
        let elems = ok(subgroup_elements(&z.generators, d.rank(), d.p()))?;
        let k = rng.gen_range(1..=2);
        let a: Vec<TorusElement> = (0..k).map(|_| elems[rng.gen_range(0..elems.len())].clone()).collect();
        laws(d, &a, &format!("seed {s}: {key}"))?;
        count += 1;
    }
    Ok(format!("{count} quotients checked, 50 random"))
}

// 6 ------------------------------------------------------------------------

fn split_round_trip() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut pools: BTreeMap<u64, Vec<RootDatum>> = BTreeMap::new();
    for p in primes() {
        let mut keys = vec!["SU(2)", "SU(3)", "SU(4)", "Sp(2)", "Sp(3)", "Spin(7)", "G2"];
        if p == 2 {
            keys.push("DI4");
        }
        let data = keys.iter().map(|k| get_str(&format!("{k}@{p}"))).collect::<Result<Vec<_>, _>>();
        pools.insert(p, ok(data)?);
    }
    let mut done = 0;
    while done < 100 {
        let p = primes()[rng.gen_range(0..3)];
        let pool = &pools[&p];
        let k = rng.gen_range(1..=3);
        let factors: Vec<&RootDatum> = (0..k).map(|_| &pool[rng.gen_range(0..pool.len())]).collect();
        let rank: usize = factors.iter().map(|f| f.rank()).sum();
        let order: usize = factors.iter().map(|f| f.weyl().order()).product();
        if rank > 7 || order > 6000 {
            continue;
        }
        let mut prod = factors[0].clone();
        for f in &factors[1..] {
            prod = ok(prod.product(f))?;
        }
        let q = random_unimodular(&mut rng, rank, 3 * rank);
        let disguised = ok(prod.change_basis(&q))?;
        let parts = ok(disguised.split_irreducibles())?;
        let mut want: Vec<String> =
            factors.iter().map(|f| serde_json::to_string(&fingerprint(f).unwrap()).unwrap()).collect();
        let mut got: Vec<String> =
            parts.iter().map(|(f, _)| serde_json::to_string(&fingerprint(f).unwrap()).unwrap()).collect();
        want.sort();
        got.sort();
        ensure!(want == got, "case {done}: factor fingerprints differ");
        let mut reassembled = parts[0].0.clone();
        let mut inclusion = parts[0].1.clone();
        for (f, inc) in &parts[1..] {
            reassembled = ok(reassembled.product(f))?;
            inclusion = inclusion.hstack(inc);
        }
        ensure!(ok(check_isomorphism(&reassembled, &disguised, &inclusion))?, "case {done}: reassembly rejected");
        done += 1;
    }
    Ok("100 disguised products split and reassembled".into())
}

// 7 ------------------------------------------------------------------------

fn structure_round_trip() -> Result<String, String> {
    let mut count = 0;
    for p in primes() {
        for key in list_entries(4, p) {
            let d = ok(catalog::get(&key))?;
            let s = ok(structure_decomposition(&d))?;
            ensure!(ok(check_isomorphism(&s.reassembled, &d, &s.witness))?, "{key}: witness rejected");
            let again = ok(s.cover.quotient(&s.central_subgroup))?;
            ensure!(ok(again.same_as(&s.reassembled))?, "{key}: quotient not reproducible");
            let pi1 = ok(s.cover.fundamental_group())?;
            ensure!(pi1.is_finite_trivial() && pi1.free_rank == s.m0, "{key}: cover π₁ = {pi1}");
            let mut model = RootDatum::trivial(s.m0, p);
            for f in s.factors.iter().rev() {
                model = ok(f.datum.product(&model))?;
            }
            ensure!(
                ok(fingerprint(&model))? == ok(fingerprint(&s.cover))?,
                "{key}: D̃ × T does not match the factors"
            );
            count += 1;
        }
    }
    Ok(format!("{count} data reassembled from (D̃ × T)/A"))
}

// 8 ------------------------------------------------------------------------

/// Atoms with all degrees at most 16.
fn strict_atoms() -> Vec<(String, Vec<u32>)> {
    let mut a = Vec::new();
    for n in 2..=8u32 {
        a.push((format!("SU({n})"), (2..=n).map(|i| 2 * i).collect()));
    }
    for n in 2..=4u32 {
        a.push((format!("Sp({n})"), (1..=n).map(|i| 4 * i).collect()));
    }
    a.push(("Spin(7)".into(), vec![4, 6, 7, 8]));
    a.push(("Spin(8)".into(), vec![4, 6, 7, 8, 8]));
    a.push(("Spin(9)".into(), vec![4, 6, 7, 8, 16]));
    a.push(("G2".into(), vec![4, 6, 7]));
    a.push(("DI4".into(), vec![8, 12, 14, 15]));
    a
}

/// Every multiset of atoms with at most `size` generators in total, keyed by its degree multiset.
fn forward_table(size: usize) -> BTreeMap<Vec<u32>, BTreeSet<Vec<String>>> {
    let atoms = strict_atoms();
    let mut table: BTreeMap<Vec<u32>, BTreeSet<Vec<String>>> = BTreeMap::new();
    fn go(
        atoms: &[(String, Vec<u32>)],
        start: usize,
        left: usize,
        degs: &mut Vec<u32>,
        names: &mut Vec<String>,
        table: &mut BTreeMap<Vec<u32>, BTreeSet<Vec<String>>>,
    ) {
        if !names.is_empty() {
            let mut d = degs.clone();
            d.sort_unstable();
            let mut n = names.clone();
            n.sort();
            table.entry(d).or_default().insert(n);
        }
        for i in start..atoms.len() {
            let (name, ds) = &atoms[i];
            if ds.len() <= left {
                let k = degs.len();
                degs.extend(ds);
                names.push(name.clone());
                go(atoms, i, left - ds.len(), degs, names, table);
                degs.truncate(k);
                names.pop();
            }
        }
    }
    go(&atoms, 0, size, &mut Vec::new(), &mut Vec::new(), &mut table);
    table
}

fn decide(ds: &[u32]) -> Result<BTreeSet<Vec<String>>, String> {
    let r = ok(steenrod_decide(ds, SteenrodMode::Strict))?;
    Ok(r.decompositions
        .into_iter()
        .map(|mut v| {
            v.sort();
            v
        })
        .collect())
}

fn steenrod() -> Result<String, String> {
    let set = |v: &[&[&str]]| -> BTreeSet<Vec<String>> {
        v.iter()
            .map(|x| {
                let mut y: Vec<String> = x.iter().map(|s| s.to_string()).collect();
                y.sort();
                y
            })
            .collect()
    };
    ensure!(decide(&[4, 6, 7])? == set(&[&["G2"]]), "{{4,6,7}}");
    ensure!(decide(&[8, 12, 14, 15])? == set(&[&["DI4"]]), "{{8,12,14,15}}");
    ensure!(decide(&[4, 6, 7, 16, 24])? == set(&[&["F4"]]), "{{4,6,7,16,24}}");
    ensure!(decide(&[4, 4, 6, 8])? == set(&[&["SU(2)", "SU(4)"], &["Sp(2)", "SU(3)"]]), "{{4,4,6,8}}");
    ensure!(decide(&[3])?.is_empty(), "{{3}}");
    let out = cli::run(["rootdatum", "steenrod", "--degrees", "8,12,14,15"]);
    ensure!(out.stdout.trim() == r#"[["DI4"]]"#, "cli printed {}", out.stdout);

    let table = forward_table(6);
    let mut checked = 0;
    fn multisets(lo: u32, hi: u32, size: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == size {
            return;
        }
        let from = cur.last().copied().unwrap_or(lo);
        for d in from..=hi {
            cur.push(d);
            multisets(lo, hi, size, cur, out);
            cur.pop();
        }
    }
    let mut all = Vec::new();
    multisets(4, 16, 6, &mut Vec::new(), &mut all);
    for ds in &all {
        let expect = table.get(ds).cloned().unwrap_or_default();
        ensure!(decide(ds)? == expect, "{ds:?}: library and enumeration disagree");
        checked += 1;
    }
    Ok(format!("{checked} degree multisets cross-checked"))
}

// 9 ------------------------------------------------------------------------

fn split_signatures(ks: &rootdatum::classify::KrullSchmidt) -> rootdatum::Result<Vec<ModuleSignature>> {
    ks.summands.iter().map(|s| s.module.signature()).collect()
}

fn direct_sum(a: &F2Module, b: &F2Module) -> F2Module {
    let n = a.dim + b.dim;
    let k = a.generators.len().max(b.generators.len());
    let gens = (0..k)
        .map(|i| {
            let ga = a.generators.get(i).cloned().unwrap_or_else(|| F2Matrix::identity(a.dim));
            let gb = b.generators.get(i).cloned().unwrap_or_else(|| F2Matrix::identity(b.dim));
            F2Matrix::from_fn(n, n, |r, c| {
                if r < a.dim && c < a.dim {
                    ga.get(r, c)
                } else if r >= a.dim && c >= a.dim {
                    gb.get(r - a.dim, c - a.dim)
                } else {
                    false
                }
            })
        })
        .collect();
    F2Module::new(n, gens).unwrap()
}

fn krull_schmidt_suite() -> Result<String, String> {
    let v3 = permutation_module(3);
    let ks = ok(krull_schmidt(&v3, 0))?;
    let mut sigs = ok(split_signatures(&ks))?;
    sigs.sort();
    let want_two = ok(sum_zero_module(3).signature())?;
    ensure!(sigs.len() == 2 && sigs[0].dim == 1 && sigs[0].order == 1 && sigs[1] == want_two, "(Σ₃, V₃) → {sigs:?}");

    let gl3 = natural_module(3);
    let ks = ok(krull_schmidt(&gl3, 0))?;
    ensure!(ks.summands.len() == 1 && ks.certified, "GL₃ natural module decomposes");
    let names: Vec<String> = ok(identify_weyl_pair(&gl3, &[], 0))?.into_iter().map(|f| f.name).collect();
    ensure!(names == vec!["G2".to_string()], "GL₃ identified as {names:?}");

    let modules = [permutation_module(3),
        permutation_module(4),
        direct_sum(&natural_module(3), &permutation_module(3)),
        direct_sum(&sum_zero_module(4), &natural_module(3))];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (i, m) in modules.iter().enumerate() {
        let mut base = ok(split_signatures(&ok(krull_schmidt(m, 0))?))?;
        base.sort();
        for seed in 0..20u64 {
            let p = random_invertible_f2(&mut rng, m.dim);
            let pi = p.inverse().unwrap();
            let gens = m.generators.iter().map(|g| p.mul(g).mul(&pi)).collect();
            let conj = ok(F2Module::new(m.dim, gens))?;
            let mut got = ok(split_signatures(&ok(krull_schmidt(&conj, seed))?))?;
            got.sort();
            ensure!(got == base, "module {i}, seed {seed}: {got:?} vs {base:?}");
        }
    }
    Ok("splits and identifications stable under 20 basis changes".into())
}

// 10 -----------------------------------------------------------------------

fn lemma_suite() -> Result<String, String> {
    let mut data: Vec<(String, RootDatum)> = Vec::new();
    for p in primes() {
        for key in list_entries(4, p) {
            data.push((key.to_string(), ok(catalog::get(&key))?));
        }
    }
    // reductive data with a central torus
    for key in ["SU(2)@2", "SU(3)@3", "Sp(2)@2", "SU(5)@5"] {
        let d = ok(get_str(key))?;
        let z = ok(d.center())?;
        let g = &z.generators[0];
        let order = g.order();
        let mut coords: Vec<(i64, i64)> = g.coords().iter().map(|x| {
            (x.numer().to_i64().unwrap(), x.denom().to_i64().unwrap())
        }).collect();
        coords.push((1, order.to_i64().unwrap()));
        let t = ok(TorusElement::from_ratios(&coords, d.p()))?;
        let prod = ok(d.product(&RootDatum::trivial(1, d.p())))?;
        data.push((format!("({key} × T(1))/Z"), ok(prod.quotient(&[t]))?));
    }
    let mut reflections = 0;
    for (name, d) in &data {
        let n = d.rank();
        let l0 = ok(d.coroot_lattice())?;
        let lw = ok(d.fixed_lattice())?;
        let sum = ok(l0.sum(&lw))?;
        ensure!(l0.rank() + lw.rank() == sum.rank(), "{name}: L₀ ∩ L^W ≠ 0");
        ensure!(sum.rank() == n, "{name}: L₀ + L^W has rank {}", sum.rank());
        let idx = ok(cokernel_structure(&l0.basis().vstack(lw.basis()), d.p()))?;
        ensure!(idx.free_rank == 0, "{name}: infinite index");
        for (i, r) in d.reflections().iter().enumerate() {
            let b = d.coroot(i);
            let mut acc = vec![Scalar::zero(); n];
            let mut v = b.clone();
            for _ in 0..r.order {
                acc = acc.iter().zip(&v).map(|(x, y)| x + y).collect();
                v = r.matrix.apply(&v);
            }
            ensure!(acc.iter().all(Scalar::is_zero), "{name}: N·b ≠ 0 for reflection {i}");
            reflections += 1;
        }
    }
    Ok(format!("{} data, {reflections} reflections", data.len()))
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("axiom suite on the rank ≤ 4 catalog", axiom_suite),
        ("π₁ and center regression table", invariant_table),
        ("Sp(3) versus Spin(7) at p = 2 and 3", sp_spin),
        ("DI(4) certification", di4),
        ("quotient, cover and adjoint laws", quotient_laws),
        ("splitting round trip", split_round_trip),
        ("structure decomposition round trip", structure_round_trip),
        ("Steenrod decision", steenrod),
        ("Krull–Schmidt over 𝔽₂", krull_schmidt_suite),
        ("lemma suite", lemma_suite),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !only.is_empty() && !only.contains(&(i + 1)) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
