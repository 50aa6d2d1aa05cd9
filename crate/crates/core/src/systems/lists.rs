use super::{braces, Caps, Table};
use crate::error::{Error, Result};
use crate::regular::{carrier, EqSystem, Elem, Node, Sort};
use crate::system::InferenceSystem;

/// States of `l` rendered as standalone terms, with the head and tail of each cell.
struct Cells {
    names: Vec<String>,
    cells: Vec<Option<(i64, usize)>>,
    carrier: Vec<i64>,
}

fn cells(l: &EqSystem) -> Result<Cells> {
    if l.sort() != Sort::List {
        return Err(Error::ShapeMismatch("expected a list".into()));
    }
    let carrier: Vec<i64> = carrier(l)?.into_iter().collect();
    let cells = l
        .nodes()
        .iter()
        .map(|n| match *n {
            Node::Cons { head: Elem::Atom(x), tail } => Some((x, tail)),
            _ => None,
        })
        .collect();
    let names = (0..l.len()).map(|s| l.subterm(s).to_string()).collect();
    Ok(Cells { names, cells, carrier })
}

/// `member(x,l,b)`: `b` tells whether `x` occurs in `l`.
///
/// `member(x,x::l,T)`; `member(x,y::l,b) <- member(x,l,b)` for `x ≠ y`;
/// coaxioms `member(x,l,F)`. Nothing concludes a judgement about the empty
/// list, so only lists without a `Λ` tail get an `F` answer.
pub fn build_member(l: &EqSystem, x: i64) -> Result<InferenceSystem> {
    let c = cells(l)?;
    let n = c.names.len();
    let id = |s: usize, b: bool| 2 * s + b as usize;
    let mut names = Vec::with_capacity(2 * n);
    for s in &c.names {
        names.push(format!("member({x},{s},F)"));
        names.push(format!("member({x},{s},T)"));
    }
    let mut t = Table::new(names, Caps::default().rules);
    for (s, cell) in c.cells.iter().enumerate() {
        if let Some((y, tail)) = *cell {
            if y == x {
                t.rule(id(s, true), [])?;
            } else {
                for b in [false, true] {
                    t.rule(id(s, b), [id(tail, b)])?;
                }
            }
        }
        t.coaxiom(id(s, false));
    }
    Ok(t.builder.build())
}

/// `allPos(l,b)`: `b` tells whether every element of `l` is positive.
///
/// `allPos(Λ,T)`; `allPos(x::l,F)` for `x ≤ 0`; `allPos(x::l,b) <- allPos(l,b)`
/// for `x > 0`; coaxioms `allPos(l,T)`.
pub fn build_all_pos(l: &EqSystem) -> Result<InferenceSystem> {
    let c = cells(l)?;
    let id = |s: usize, b: bool| 2 * s + b as usize;
    let mut names = Vec::new();
    for s in &c.names {
        names.push(format!("allPos({s},F)"));
        names.push(format!("allPos({s},T)"));
    }
    let mut t = Table::new(names, Caps::default().rules);
    for (s, cell) in c.cells.iter().enumerate() {
        match *cell {
            None => t.rule(id(s, true), [])?,
            Some((x, _)) if x <= 0 => t.rule(id(s, false), [])?,
            Some((_, tail)) => {
                for b in [false, true] {
                    t.rule(id(s, b), [id(tail, b)])?;
                }
            }
        }
        t.coaxiom(id(s, true));
    }
    Ok(t.builder.build())
}

/// `maxElem(l,z)`: `z` is the largest element of `l`, with values drawn from
/// the carrier (closed under binary max).
///
/// `maxElem(x::Λ,x)`; `maxElem(x::l,max(x,y)) <- maxElem(l,y)`; coaxioms
/// `maxElem(x::l,x)`.
pub fn build_max_elem(l: &EqSystem) -> Result<InferenceSystem> {
    let c = cells(l)?;
    let k = c.carrier.len();
    let id = |s: usize, vi: usize| s * k + vi;
    let vidx = |v: i64| c.carrier.binary_search(&v).unwrap();
    let mut names = Vec::new();
    for s in &c.names {
        for v in &c.carrier {
            names.push(format!("maxElem({s},{v})"));
        }
    }
    let mut t = Table::new(names, Caps::default().rules);
    for (s, cell) in c.cells.iter().enumerate() {
        let Some((x, tail)) = *cell else { continue };
        if c.cells[tail].is_none() {
            t.rule(id(s, vidx(x)), [])?;
        }
        for &y in &c.carrier {
            t.rule(id(s, vidx(x.max(y))), [id(tail, vidx(y))])?;
        }
        t.coaxiom(id(s, vidx(x)));
    }
    Ok(t.builder.build())
}

/// `elems(l,xs)`: `xs` is the set of elements of `l`, ranging over subsets of
/// the carrier.
///
/// `elems(Λ,{})`; `elems(x::l,{x}∪xs) <- elems(l,xs)`; coaxioms `elems(l,{})`.
pub fn build_elems(l: &EqSystem) -> Result<InferenceSystem> {
    build_elems_with(l, &Caps::default())
}

fn build_elems_with(l: &EqSystem, caps: &Caps) -> Result<InferenceSystem> {
    let c = cells(l)?;
    let k = c.carrier.len();
    if k > caps.elements || k > 24 {
        return Err(Error::CapExceeded {
            cap: caps.elements.min(24),
            what: "list carrier",
        });
    }
    let sets = 1usize << k;
    let id = |s: usize, m: usize| s * sets + m;
    let mut names = Vec::new();
    for s in &c.names {
        for m in 0..sets {
            let xs = (0..k).filter(|i| m >> i & 1 == 1).map(|i| c.carrier[i]);
            names.push(format!("elems({s},{})", braces(xs)));
        }
    }
    let mut t = Table::new(names, caps.rules);
    for (s, cell) in c.cells.iter().enumerate() {
        match *cell {
            None => t.rule(id(s, 0), [])?,
            Some((x, tail)) => {
                let bit = 1 << c.carrier.binary_search(&x).unwrap();
                for m in 0..sets {
                    t.rule(id(s, m | bit), [id(tail, m)])?;
                }
            }
        }
        t.coaxiom(id(s, 0));
    }
    Ok(t.builder.build())
}

/// The four list judgements over one list; `member` is built for element `x`.
#[derive(Debug)]
pub struct ListPreds {
    pub member: InferenceSystem,
    pub all_pos: InferenceSystem,
    pub max_elem: InferenceSystem,
    pub elems: InferenceSystem,
}

pub fn build_list_preds(l: &EqSystem, x: i64) -> Result<ListPreds> {
    Ok(ListPreds {
        member: build_member(l, x)?,
        all_pos: build_all_pos(l)?,
        max_elem: build_max_elem(l)?,
        elems: build_elems(l)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ones_stream() {
        let ones = EqSystem::lasso(&[], &[1]);
        let p = build_list_preds(&ones, 2).unwrap();
        let l = ones.to_string();
        let gen = p.all_pos.generated();
        assert!(gen.contains_judgement(&format!("allPos({l},T)")));
        assert!(!gen.contains_judgement(&format!("allPos({l},F)")));
        let gen = p.member.generated();
        assert!(gen.contains_judgement(&format!("member(2,{l},F)")));
        assert!(!gen.contains_judgement(&format!("member(2,{l},T)")));
        assert_eq!(p.elems.generated().to_strings(), [format!("elems({l},{{1}})")]);
        assert_eq!(p.max_elem.generated().to_strings(), [format!("maxElem({l},1)")]);
    }

    #[test]
    fn max_of_alternating_stream() {
        let l = EqSystem::lasso(&[], &[1, 2]);
        let gen = build_max_elem(&l).unwrap().generated();
        let s = l.to_string();
        assert!(gen.contains_judgement(&format!("maxElem({s},2)")));
        assert!(!gen.contains_judgement(&format!("maxElem({s},1)")));
    }

    #[test]
    fn finite_lists() {
        let l = EqSystem::finite_list(&[3, -1, 2]);
        let gen = build_all_pos(&l).unwrap().generated();
        assert!(gen.contains_judgement("allPos(3::-1::2::[],F)"));
        assert!(gen.contains_judgement("allPos(2::[],T)"));
        assert!(gen.contains_judgement("allPos([],T)"));
        let gen = build_max_elem(&l).unwrap().generated();
        assert!(gen.contains_judgement("maxElem(3::-1::2::[],3)"));
        let gen = build_member(&l, -1).unwrap().generated();
        assert!(gen.contains_judgement("member(-1,3::-1::2::[],T)"));
        assert!(!gen.contains_judgement("member(-1,3::-1::2::[],F)"));
    }

    #[test]
    fn trees_are_rejected() {
        let t = EqSystem::parse("T = tree 0 L\nL = nil").unwrap();
        assert!(matches!(build_all_pos(&t), Err(Error::ShapeMismatch(_))));
        let d = EqSystem::digits(&[], &[1]).unwrap();
        assert!(matches!(build_elems(&d), Err(Error::ShapeMismatch(_))));
    }
}
