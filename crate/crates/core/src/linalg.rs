//! Exact rank and linear solving for families of sparse vectors.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::filtered::{Basis, FilteredVector};
use crate::scalar::Scalar;

/// Rank of the span of `vectors` (precision tags are ignored).
pub fn rank<B: Basis>(vectors: &[FilteredVector<B>]) -> usize {
    // pivot key -> row whose smallest key is the pivot, normalized to 1 there
    let mut pivots: BTreeMap<B, BTreeMap<B, Scalar>> = BTreeMap::new();
    for v in vectors {
        let mut row: BTreeMap<B, Scalar> = v.iter().map(|(b, c)| (b.clone(), c.clone())).collect();
        loop {
            let Some((lead, c)) = row.iter().next().map(|(b, c)| (b.clone(), c.clone())) else {
                break;
            };
            match pivots.get(&lead) {
                Some(p) => {
                    for (b, pc) in p {
                        let slot = row.entry(b.clone()).or_insert_with(Scalar::zero);
                        *slot = &*slot - &(&c * pc);
                        if slot.is_zero() {
                            row.remove(b);
                        }
                    }
                }
                None => {
                    let inv = c.checked_inv().expect("nonzero pivot");
                    let normalized: BTreeMap<B, Scalar> =
                        row.into_iter().map(|(b, x)| (b, &x * &inv)).collect();
                    pivots.insert(lead, normalized);
                    break;
                }
            }
        }
    }
    pivots.len()
}

type Sparse<K> = BTreeMap<K, Scalar>;

fn axpy<K: Ord + Clone>(row: &mut Sparse<K>, c: &Scalar, other: &Sparse<K>) {
    for (k, x) in other {
        let slot = row.entry(k.clone()).or_insert_with(Scalar::zero);
        *slot = &*slot + &(c * x);
        if slot.is_zero() {
            row.remove(k);
        }
    }
}

/// Coefficients `x` with `target = Σ xᵢ·columns[i]`, if any exist.
pub fn solve<K: Ord + Clone>(columns: &[Sparse<K>], target: &Sparse<K>) -> Option<Vec<Scalar>> {
    // lead key -> (row with that smallest key, normalized; its expression in the columns)
    let mut pivots: BTreeMap<K, (Sparse<K>, Vec<Scalar>)> = BTreeMap::new();
    let zero = || alloc::vec![Scalar::zero(); columns.len()];
    for (i, col) in columns.iter().enumerate() {
        let mut row = col.clone();
        let mut combo = zero();
        combo[i] = Scalar::one();
        while let Some((lead, c)) = row.iter().next().map(|(k, c)| (k.clone(), c.clone())) {
            match pivots.get(&lead) {
                Some((p, pc)) => {
                    let neg = -c;
                    axpy(&mut row, &neg, p);
                    for (x, y) in combo.iter_mut().zip(pc) {
                        *x = &*x + &(&neg * y);
                    }
                }
                None => {
                    let inv = c.checked_inv().expect("nonzero pivot");
                    let row = row.into_iter().map(|(k, x)| (k, &x * &inv)).collect();
                    let combo = combo.into_iter().map(|x| &x * &inv).collect();
                    pivots.insert(lead, (row, combo));
                    break;
                }
            }
        }
    }
    let mut t = target.clone();
    let mut x = zero();
    while let Some((lead, c)) = t.iter().next().map(|(k, c)| (k.clone(), c.clone())) {
        let (p, pc) = pivots.get(&lead)?;
        axpy(&mut t, &-c.clone(), p);
        for (xi, y) in x.iter_mut().zip(pc) {
            *xi = &*xi + &(&c * y);
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtered::{Monomial, VariableId};

    #[test]
    fn dependent_family() {
        let x = Monomial::var(VariableId::new(1, 1));
        let y = Monomial::var(VariableId::new(1, 2));
        let mut a = FilteredVector::basis(x.clone());
        a.add_term(y.clone(), Scalar::from_integer(2));
        let b = FilteredVector::term(Scalar::tau(), y);
        let mut c = a.scaled(&Scalar::rho());
        c.add_scaled(&Scalar::one(), &b);
        assert_eq!(rank(&[a.clone(), b.clone()]), 2);
        assert_eq!(rank(&[a, b, c]), 2);
        assert_eq!(rank::<Monomial>(&[]), 0);
    }

    #[test]
    fn solves_combinations() {
        let col = |pairs: &[(u32, i64)]| -> Sparse<u32> {
            pairs
                .iter()
                .map(|&(k, c)| (k, Scalar::from_integer(c)))
                .collect()
        };
        let a = col(&[(1, 1), (2, 1)]);
        let b = col(&[(2, 1), (3, 2)]);
        let t = col(&[(1, 2), (2, -1), (3, -6)]);
        let x = solve(&[a.clone(), b.clone()], &t).unwrap();
        assert_eq!(
            x,
            alloc::vec![Scalar::from_integer(2), Scalar::from_integer(-3)]
        );
        assert!(solve(&[a, b], &col(&[(1, 1)])).is_none());
        assert_eq!(solve::<u32>(&[], &BTreeMap::new()), Some(alloc::vec![]));
    }
}
