//! Normal ordering by rewriting.
//!
//! Rules, applied at the first adjacent pair that is out of order:
//!   P(m) Q(m) -> Q(m) P(m) - i
//!   P(m) F(f) -> F(f) P(m) - i a_m F(f')     (a_m = q_m coefficient of f's argument)
//! every other out-of-order pair commutes and is swapped. Each step lowers
//! either the p-degree or the number of inversions, so the loop terminates,
//! and since all non-P letters commute the result does not depend on which
//! inversion is chosen.

use std::collections::BTreeMap;

use num::Zero;

use super::coeff::Coefficient;
use super::term::{ClassicalMonomial, QuantumGenerator, QuantumWord, Term, TermKey};

fn first_inversion(word: &[QuantumGenerator]) -> Option<usize> {
    word.windows(2).position(|w| w[0] > w[1])
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Coefficient>, key: K, c: Coefficient) {
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = o.get() + &c;
            if sum.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

pub(crate) fn normal_order<I: IntoIterator<Item = Term>>(terms: I) -> Vec<Term> {
    let mut pending: BTreeMap<(ClassicalMonomial, Vec<QuantumGenerator>), Coefficient> = BTreeMap::new();
    for t in terms {
        if !t.coeff.is_zero() {
            accumulate(&mut pending, (t.classical, t.word.0), t.coeff);
        }
    }

    let mut done: BTreeMap<TermKey, Coefficient> = BTreeMap::new();
    let minus_i = -Coefficient::i();

    while let Some(((classical, word), c)) = pending.pop_first() {
        let Some(j) = first_inversion(&word) else {
            accumulate(&mut done, TermKey { word: QuantumWord(word), classical }, c);
            continue;
        };

        let mut swapped = word.clone();
        swapped.swap(j, j + 1);
        accumulate(&mut pending, (classical.clone(), swapped), c.clone());

        match (&word[j], &word[j + 1]) {
            (QuantumGenerator::P(m), QuantumGenerator::Q(n)) if m == n => {
                let mut rest = word.clone();
                rest.drain(j..j + 2);
                accumulate(&mut pending, (classical, rest), &c * &minus_i);
            }
            (QuantumGenerator::P(m), QuantumGenerator::F(f)) => {
                let a = f.arg.q_coeff(*m);
                if !a.is_zero() {
                    let mut rest = word.clone();
                    rest.splice(j..j + 2, [QuantumGenerator::F(f.derived())]);
                    accumulate(&mut pending, (classical, rest), (&c * &minus_i).scale_real(&a));
                }
            }
            _ => {}
        }
    }

    done.into_iter().map(|(k, c)| Term::new(c, k.classical, k.word)).collect()
}
