//! Which polynomial algebras on given generator degrees are tensor products
//! of the known realizable factors.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SteenrodMode {
    Strict,
    Extended,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    pub name: String,
    pub degrees: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteenrodResult {
    pub mode: SteenrodMode,
    pub decompositions: Vec<Vec<String>>,
    /// Set in extended mode: the atom list there is not known to be complete.
    pub conjectural_completeness: bool,
}

fn atom(name: String, degrees: Vec<u32>) -> Atom {
    Atom { name, degrees }
}

/// All atoms whose largest degree is at most `max_degree`, in a fixed order.
pub fn atoms(mode: SteenrodMode, max_degree: u32) -> Vec<Atom> {
    let mut out = Vec::new();
    if mode == SteenrodMode::Extended {
        out.push(atom("RPinf".into(), vec![1]));
        out.push(atom("CPinf".into(), vec![2]));
    }
    for n in 2..=max_degree / 2 {
        out.push(atom(format!("SU({n})"), (2..=n).map(|i| 2 * i).collect()));
    }
    // Sp(1) = SU(2)
    for n in 2..=max_degree / 4 {
        out.push(atom(format!("Sp({n})"), (1..=n).map(|i| 4 * i).collect()));
    }
    out.push(atom("Spin(7)".into(), vec![4, 6, 7, 8]));
    out.push(atom("Spin(8)".into(), vec![4, 6, 7, 8, 8]));
    out.push(atom("Spin(9)".into(), vec![4, 6, 7, 8, 16]));
    out.push(atom("G2".into(), vec![4, 6, 7]));
    out.push(atom("F4".into(), vec![4, 6, 7, 16, 24]));
    out.push(atom("DI4".into(), vec![8, 12, 14, 15]));
    if mode == SteenrodMode::Extended {
        for n in 5..=max_degree {
            out.push(atom(format!("SO({n})"), (2..=n).collect()));
        }
        let mut n = 0;
        loop {
            let mut d = vec![2, 3];
            d.extend((2..=2 * n + 1).map(|i| 4 * i));
            if *d.last().expect("nonempty") > max_degree.max(3) {
                break;
            }
            out.push(atom(format!("PSp({})", 2 * n + 1), d));
            n += 1;
        }
    }
    out.retain(|a| a.degrees.iter().all(|&d| d <= max_degree));
    out
}

/// Every way of writing the degree multiset as a disjoint union of atoms,
/// each listed once up to reordering of its atoms.
pub fn steenrod_decide(degrees: &[u32], mode: SteenrodMode) -> Result<SteenrodResult> {
    if let Some(&d) = degrees.iter().find(|&&d| d == 0) {
        return Err(Error::Domain(format!("generator degree {d} is not positive")));
    }
    if mode == SteenrodMode::Strict {
        if let Some(&d) = degrees.iter().find(|&&d| d < 3) {
            return Err(Error::Domain(format!(
                "strict mode needs all degrees ≥ 3, got {d}; use extended mode"
            )));
        }
    }
    let max = degrees.iter().copied().max().unwrap_or(0);
    let atoms = atoms(mode, max);
    let counts: Vec<BTreeMap<u32, usize>> = atoms.iter().map(|a| multiset(&a.degrees)).collect();
    let mut remaining = multiset(degrees);
    let mut chosen = Vec::new();
    let mut found = Vec::new();
    if !degrees.is_empty() {
        search(&atoms, &counts, 0, &mut remaining, &mut chosen, &mut found);
    }
    found.sort();
    Ok(SteenrodResult {
        mode,
        decompositions: found,
        conjectural_completeness: mode == SteenrodMode::Extended,
    })
}

fn multiset(d: &[u32]) -> BTreeMap<u32, usize> {
    let mut m = BTreeMap::new();
    for &x in d {
        *m.entry(x).or_default() += 1;
    }
    m
}

fn search(
    atoms: &[Atom],
    counts: &[BTreeMap<u32, usize>],
    start: usize,
    remaining: &mut BTreeMap<u32, usize>,
    chosen: &mut Vec<usize>,
    found: &mut Vec<Vec<String>>,
) {
    let Some((&lowest, _)) = remaining.iter().find(|(_, &c)| c > 0) else {
        found.push(chosen.iter().map(|&i| atoms[i].name.clone()).collect());
        return;
    };
    if !counts[start..].iter().any(|c| c.contains_key(&lowest)) {
        return;
    }
    for i in start..atoms.len() {
        let fits = counts[i].iter().all(|(d, c)| remaining.get(d).copied().unwrap_or(0) >= *c);
        if !fits {
            continue;
        }
        for (d, c) in &counts[i] {
            *remaining.get_mut(d).expect("fits") -= c;
        }
        chosen.push(i);
        search(atoms, counts, i, remaining, chosen, found);
        chosen.pop();
        for (d, c) in &counts[i] {
            *remaining.get_mut(d).expect("fits") += c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<Vec<String>>) -> Vec<Vec<String>> {
        for d in v.iter_mut() {
            d.sort();
        }
        v.sort();
        v
    }

    #[test]
    fn table_entries() {
        let r = steenrod_decide(&[4, 6, 7], SteenrodMode::Strict).unwrap();
        assert_eq!(r.decompositions, vec![vec!["G2".to_string()]]);
        let r = steenrod_decide(&[3], SteenrodMode::Strict).unwrap();
        assert!(r.decompositions.is_empty());
        assert!(steenrod_decide(&[2, 4], SteenrodMode::Strict).is_err());
    }

    #[test]
    fn two_decompositions() {
        let r = steenrod_decide(&[4, 4, 6, 8], SteenrodMode::Strict).unwrap();
        let want = sorted(vec![
            vec!["SU(2)".into(), "SU(4)".into()],
            vec!["Sp(2)".into(), "SU(3)".into()],
        ]);
        assert_eq!(sorted(r.decompositions), want);
    }

    #[test]
    fn extended_atoms() {
        let r = steenrod_decide(&[1, 2, 3], SteenrodMode::Extended).unwrap();
        assert_eq!(r.decompositions, vec![vec!["RPinf".to_string(), "PSp(1)".to_string()]]);
        assert!(r.conjectural_completeness);
        let names: Vec<String> = atoms(SteenrodMode::Extended, 12).into_iter().map(|a| a.name).collect();
        assert!(names.contains(&"PSp(3)".to_string()));
        assert!(names.contains(&"SO(5)".to_string()));
        assert!(!names.contains(&"SO(4)".to_string()));
    }
}
