use std::collections::hash_map::Entry;
use std::collections::HashMap;

use super::{Caps, Table};
use crate::error::{Error, Result};
use crate::regular::{EqSystem, Node, Sort};
use crate::system::InferenceSystem;

const CARRIES: [i64; 4] = [-1, 0, 1, 2];

fn digit_at(r: &EqSystem, s: usize) -> (i64, usize) {
    match *r.node(s) {
        Node::Digit { digit, next } => (digit as i64, next),
        _ => unreachable!("digit streams only hold digit states"),
    }
}

/// `add(r1,r2,r,c)`: the reals with decimal digits `r1`, `r2` and `r` satisfy
/// `r1 + r2 = r + c`.
///
/// Universe: state triples reachable by stepping all three streams together,
/// times carries in `{-1,0,1,2}`. One rule
/// `add(d1::r1,d2::r2,(s mod 10)::r,s div 10) <- add(r1,r2,r,c)` with
/// `s = d1 + d2 + c`; every judgement is a coaxiom.
pub fn build_add(r1: &EqSystem, r2: &EqSystem, r: &EqSystem) -> Result<InferenceSystem> {
    for x in [r1, r2, r] {
        if x.sort() != Sort::Digits {
            return Err(Error::ShapeMismatch("expected a digit stream".into()));
        }
    }
    let mut triples: Vec<(usize, usize, usize)> = vec![(0, 0, 0)];
    let mut index: HashMap<(usize, usize, usize), usize> = HashMap::from([((0, 0, 0), 0)]);
    let mut i = 0;
    while i < triples.len() {
        let (a, b, c) = triples[i];
        let next = (digit_at(r1, a).1, digit_at(r2, b).1, digit_at(r, c).1);
        if let Entry::Vacant(e) = index.entry(next) {
            e.insert(triples.len());
            triples.push(next);
        }
        i += 1;
    }
    let render = |x: &EqSystem| -> Vec<String> { (0..x.len()).map(|s| x.subterm(s).to_string()).collect() };
    let (n1, n2, n) = (render(r1), render(r2), render(r));
    let id = |k: usize, c: i64| k * CARRIES.len() + (c + 1) as usize;
    let mut names = Vec::new();
    for &(a, b, c) in &triples {
        for carry in CARRIES {
            names.push(format!("add({},{},{},{carry})", n1[a], n2[b], n[c]));
        }
    }
    let mut t = Table::new(names, Caps::default().rules);
    for (k, &(a, b, c)) in triples.iter().enumerate() {
        let ((d1, a2), (d2, b2), (d, c2)) = (digit_at(r1, a), digit_at(r2, b), digit_at(r, c));
        let premise_triple = index[&(a2, b2, c2)];
        for carry in CARRIES {
            let s = d1 + d2 + carry;
            let out = s.div_euclid(10);
            if s.rem_euclid(10) == d && CARRIES.contains(&out) {
                t.rule(id(k, out), [id(premise_triple, carry)])?;
            }
        }
        for carry in CARRIES {
            t.coaxiom(id(k, carry));
        }
    }
    Ok(t.builder.build())
}
