mod common;

use nestweight::logic::{
    and, classify, edge, eq, eval_boolean, eval_weighted, exists1, exists2, forall1, forall2, is_synt_unambiguous,
    konst, lab, leq, member, minus, or, plus, Assignment, Atom, Formula, Structure, Value,
};
use nestweight::{Guards, NestedWord, Semiring};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

struct Gen<'a> {
    rng: &'a mut ChaCha8Rng,
    weights: Option<Semiring>,
    fo: Vec<String>,
    so: Vec<String>,
}

impl Gen<'_> {
    fn formula(&mut self, depth: usize, size: usize) -> Formula {
        let choice = self.rng.gen_range(0..10);
        if depth > 0 && (self.fo.is_empty() || choice < 3) {
            if !self.fo.is_empty() && self.rng.gen_bool(0.2) {
                let v = format!("X{}", self.so.len() + 1);
                self.so.push(v.clone());
                let body = self.formula(depth - 1, size + 1);
                self.so.pop();
                return if self.rng.gen_bool(0.5) { exists2(&v, body) } else { forall2(&v, body) };
            }
            let v = format!("x{}", self.fo.len() + 1);
            self.fo.push(v.clone());
            let body = self.formula(depth - 1, size + 1);
            self.fo.pop();
            return if self.rng.gen_bool(0.5) { exists1(&v, body) } else { forall1(&v, body) };
        }
        if let Some(k) = self.weights {
            if choice == 9 {
                return konst(common::weight(self.rng, k, 0.2));
            }
        }
        if self.fo.is_empty() {
            return eq("x0", "x0");
        }
        if choice < 6 && size < 4 {
            let a = self.formula(depth, size + 1);
            let b = self.formula(depth, size + 1);
            return if self.rng.gen_bool(0.5) { and(a, b) } else { or(a, b) };
        }
        let x = self.fo.choose(self.rng).unwrap().clone();
        let y = self.fo.choose(self.rng).unwrap().clone();
        let atom = match self.rng.gen_range(0..5) {
            0 => eq(&x, &y),
            1 => lab(["a", "b"].choose(self.rng).unwrap(), &x),
            2 => leq(&x, &y),
            3 => edge(&x, &y),
            _ => match self.so.choose(self.rng) {
                Some(s) => member(&x, s),
                None => edge(&x, &y),
            },
        };
        match atom {
            Formula::Atom(a) if self.rng.gen_bool(0.3) => Formula::NegAtom(a),
            other => other,
        }
    }
}

/// A formula whose only possible free variable is `x0`.
fn formula(seed: u64, weights: Option<Semiring>) -> Formula {
    let mut rng = common::rng(seed);
    let mut g = Gen { rng: &mut rng, weights, fo: vec!["x0".into()], so: Vec::new() };
    g.formula(3, 0)
}

fn sentence(seed: u64) -> Formula {
    let mut rng = common::rng(seed);
    let mut g = Gen { rng: &mut rng, weights: None, fo: Vec::new(), so: Vec::new() };
    g.formula(3, 0)
}

fn structures(seed: u64) -> Vec<NestedWord> {
    (0..3).map(|s| common::nested_word(seed.wrapping_add(s), &common::letters(&["a", "b"]), 4)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn junk_variables_are_ignored(k in common::any_semiring(), seed in any::<u64>()) {
        let g = Guards::default();
        let f = formula(seed, Some(k));
        for nw in structures(seed) {
            let mut asg = Assignment::new();
            asg.insert("x0".into(), Value::Position(1));
            let base = eval_weighted(&f, k, Structure::Nested(&nw), &asg, &g).unwrap();
            asg.insert("junk".into(), Value::Position(nw.len()));
            asg.insert("Junk".into(), Value::Set((1..=nw.len()).collect()));
            prop_assert_eq!(eval_weighted(&f, k, Structure::Nested(&nw), &asg, &g).unwrap(), base);
        }
    }

    #[test]
    fn disambiguation_is_characteristic(seed in any::<u64>()) {
        let g = Guards::default();
        let f = sentence(seed);
        let (p, m) = (plus(&f).unwrap(), minus(&f).unwrap());
        prop_assert!(is_synt_unambiguous(&p) && is_synt_unambiguous(&m));
        let asg = Assignment::new();
        for nw in structures(seed) {
            let truth = eval_boolean(&f, Structure::Nested(&nw), &asg, &g).unwrap();
            for k in Semiring::ALL {
                let wp = eval_weighted(&p, k, Structure::Nested(&nw), &asg, &g).unwrap();
                let wm = eval_weighted(&m, k, Structure::Nested(&nw), &asg, &g).unwrap();
                prop_assert_eq!(wp.clone(), if truth { k.one() } else { k.zero() });
                prop_assert_eq!(k.plus(&wp, &wm), k.one());
            }
            let wb = eval_weighted(&f, Semiring::Boolean, Structure::Nested(&nw), &asg, &g).unwrap();
            prop_assert_eq!(wb == Semiring::Boolean.one(), truth);
        }
    }

    #[test]
    fn fragment_inclusions(k in common::any_semiring(), seed in any::<u64>()) {
        let f = formula(seed, Some(k));
        let c = classify(&f);
        prop_assert!(!c.synt_unambiguous || c.a_umso);
        prop_assert!(!c.a_umso || c.w_umso);
        prop_assert!(!c.s_rmso || c.sw_rmso);
        prop_assert!(!c.s_rfo || c.fo);
        let p = classify(&plus(&sentence(seed)).unwrap());
        prop_assert!(p.synt_unambiguous);
    }
}

#[test]
fn negated_atom_display() {
    let f = Formula::NegAtom(Atom::Lab("a".into(), "x".into()));
    assert_eq!(f.to_string(), "(not (lab a x))");
}
