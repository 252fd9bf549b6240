//! Randomized suites shared by the property tests and the acceptance run.
#![allow(dead_code)]

use std::collections::HashSet;

use coincalc::abelian::{quotient, smith_normal_form, FgAbGroup, GroupElement, GroupHom, IntMatrix};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 0x5eed_c01c;

fn wide(m: &IntMatrix) -> Vec<Vec<i128>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect()
}

fn product(a: &[Vec<i128>], b: &[Vec<i128>], inner: usize, cols: usize) -> Vec<Vec<i128>> {
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

fn is_identity(m: &[Vec<i128>]) -> bool {
    m.iter().enumerate().all(|(i, r)| r.iter().enumerate().all(|(j, &x)| x == i128::from(i == j)))
}

/// Checks one Smith form against its definition; `Err` describes the first violation.
pub fn check_snf(a: &IntMatrix) -> Result<(), String> {
    let s = smith_normal_form(a).map_err(|e| format!("{a:?}: {e}"))?;
    let (r, c) = a.shape();
    let (u, ui, v, vi) = (wide(&s.u), wide(&s.u_inv), wide(&s.v), wide(&s.v_inv));
    let d = wide(&s.d);
    if product(&product(&u, &wide(a), r, c), &v, c, c) != d {
        return Err(format!("D != U A V for {a:?}"));
    }
    if !is_identity(&product(&u, &ui, r, r)) || !is_identity(&product(&v, &vi, c, c)) {
        return Err(format!("U or V is not unimodular for {a:?}"));
    }
    let off_diagonal = d.iter().enumerate().any(|(i, row)| row.iter().enumerate().any(|(j, &x)| i != j && x != 0));
    if off_diagonal {
        return Err(format!("D is not diagonal for {a:?}"));
    }
    let diag: Vec<i128> = (0..r.min(c)).map(|i| d[i][i]).collect();
    if diag.iter().any(|&x| x < 0) {
        return Err(format!("negative invariant factor for {a:?}"));
    }
    for w in diag.windows(2) {
        let ok = if w[0] == 0 { w[1] == 0 } else { w[1] % w[0] == 0 };
        if !ok {
            return Err(format!("divisibility fails on {diag:?} for {a:?}"));
        }
    }
    if diag.iter().filter(|&&x| x != 0).count() != s.rank {
        return Err(format!("rank mismatch for {a:?}"));
    }
    Ok(())
}

/// `cases` random matrices with entries in [-9, 9] and both dimensions in 1..=6.
pub fn snf_suite(cases: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        check_snf(&IntMatrix::from_rows(&rows, c).unwrap())?;
    }
    Ok(cases)
}

/// A random finite group of order at most `max_order`, in canonical form.
pub fn random_finite_group(rng: &mut impl Rng, max_order: i64) -> FgAbGroup {
    loop {
        let count = rng.gen_range(0..=3);
        let mut torsion: Vec<i64> = Vec::new();
        for _ in 0..count {
            let next = match torsion.last() {
                None => rng.gen_range(2..=12),
                Some(&t) => t * rng.gen_range(1..=4),
            };
            torsion.push(next);
        }
        if torsion.iter().product::<i64>() <= max_order {
            return FgAbGroup::new(0, torsion).unwrap();
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// A uniformly chosen well-defined homomorphism between finite groups: the
/// entry from a generator of order `o` into a factor of order `t` must be a
/// multiple of `t / gcd(t, o)`.
pub fn random_hom(rng: &mut impl Rng, domain: &FgAbGroup, codomain: &FgAbGroup) -> GroupHom {
    let rows: Vec<Vec<i64>> = codomain
        .torsion()
        .iter()
        .map(|&t| {
            domain
                .torsion()
                .iter()
                .map(|&o| {
                    let step = t / gcd(t, o);
                    step * rng.gen_range(0..t / step)
                })
                .collect()
        })
        .collect();
    GroupHom::from_rows(domain.clone(), codomain.clone(), &rows).unwrap()
}

fn key(x: &GroupElement) -> Vec<i64> {
    x.coords().to_vec()
}

/// Kernel, image, quotient and membership of `f` against brute-force enumeration.
pub fn check_hom(f: &GroupHom) -> Result<(), String> {
    let err = |what: &str| format!("{what} disagrees with enumeration for {:?}", f.matrix());
    let dom = f.domain().enumerate_torsion_part().map_err(|e| e.to_string())?;
    let cod = f.codomain().enumerate_torsion_part().map_err(|e| e.to_string())?;
    let mut kernel = HashSet::new();
    let mut image = HashSet::new();
    for x in &dom {
        let y = f.apply(x).map_err(|e| e.to_string())?;
        if y.is_zero() {
            kernel.insert(key(x));
        }
        image.insert(key(&y));
    }
    let k = f.kernel().map_err(|e| e.to_string())?;
    let im = f.image().map_err(|e| e.to_string())?;
    if k.order() != Some(kernel.len() as u128) || im.order() != Some(image.len() as u128) {
        return Err(err("subgroup order"));
    }
    for x in &dom {
        if k.contains(x).map_err(|e| e.to_string())? != kernel.contains(&key(x)) {
            return Err(err("kernel membership"));
        }
    }
    let (q, proj) = quotient(&im).map_err(|e| e.to_string())?;
    if q.order() != Some((cod.len() / image.len()) as u128) {
        return Err(err("quotient order"));
    }
    let mut hit = HashSet::new();
    for y in &cod {
        let inside = image.contains(&key(y));
        if im.contains(y).map_err(|e| e.to_string())? != inside {
            return Err(err("image membership"));
        }
        let py = proj.apply(y).map_err(|e| e.to_string())?;
        if py.is_zero() != inside {
            return Err(err("quotient kernel"));
        }
        hit.insert(key(&py));
        match f.preimage(y).map_err(|e| e.to_string())? {
            Some(x) if inside && key(&f.apply(&x).map_err(|e| e.to_string())?) == key(y) => {}
            None if !inside => {}
            _ => return Err(err("preimage")),
        }
    }
    if hit.len() != cod.len() / image.len() {
        return Err(err("quotient surjectivity"));
    }
    Ok(())
}

/// `count` random homomorphisms between finite groups of order at most 200.
pub fn hom_suite(count: usize, seed: u64) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let a = random_finite_group(&mut rng, 200);
        let b = random_finite_group(&mut rng, 200);
        check_hom(&random_hom(&mut rng, &a, &b))?;
    }
    Ok(count)
}
