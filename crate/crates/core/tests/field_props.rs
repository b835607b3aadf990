use cliquepart::field::{prime_power, FieldElement, FieldSpec};

fn prime_powers(max: u64) -> Vec<u64> {
    (2..=max).filter(|&q| prime_power(q).is_some()).collect()
}

/// Every field axiom over all elements, with multiplication checked against
/// plain polynomial multiplication mod the modulus.
#[test]
fn field_axioms_exhaustive_up_to_128() {
    for q in prime_powers(128) {
        let f = FieldSpec::of_order(q).unwrap();
        let els: Vec<FieldElement> = f.elements().collect();
        let (zero, one) = (f.zero(), f.one());
        for &a in &els {
            assert_eq!(f.add(a, zero), a);
            assert_eq!(f.mul(a, one), a);
            assert_eq!(f.add(a, f.neg(a)), zero);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), one, "q={q}");
            }
            for &b in &els {
                let ab = f.mul(a, b);
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(ab, f.mul(b, a));
                assert_eq!(ab, f.mul_reference(a, b), "q={q}");
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(ab, c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(ab, f.mul(a, c)));
                }
            }
        }
        // Frobenius x -> x^p is additive and x^q = x
        let p = f.characteristic() as u64;
        for &a in &els {
            assert_eq!(f.pow(a, q), a);
            for &b in els.iter().step_by(7) {
                assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
            }
        }
    }
}

#[test]
fn generator_has_full_order() {
    for q in prime_powers(128) {
        let f = FieldSpec::of_order(q).unwrap();
        let g = f.generator();
        let mut x = g;
        let mut order = 1;
        while x != f.one() {
            x = f.mul(x, g);
            order += 1;
        }
        assert_eq!(order, q - 1, "q={q}");
    }
}

#[test]
fn character_is_multiplicative_up_to_81() {
    for q in prime_powers(81).into_iter().filter(|q| q % 2 == 1) {
        let f = FieldSpec::of_order(q).unwrap();
        let chi: Vec<i8> = f.elements().map(|x| f.quadratic_character(x).unwrap()).collect();
        for a in f.elements() {
            for b in f.elements() {
                let ab = f.mul(a, b);
                assert_eq!(
                    chi[ab.index() as usize],
                    chi[a.index() as usize] * chi[b.index() as usize],
                    "q={q}"
                );
            }
        }
        // squares: exactly (q - 1)/2 nonzero ones, each with two roots
        let squares = chi.iter().filter(|&&c| c == 1).count() as u64;
        assert_eq!(squares, (q - 1) / 2);
    }
}

#[test]
fn minus_one_residue_law() {
    for q in prime_powers(128).into_iter().filter(|q| q % 2 == 1) {
        let f = FieldSpec::of_order(q).unwrap();
        let chi = f.quadratic_character(f.neg(f.one())).unwrap();
        let expected = if q % 4 == 1 { 1 } else { -1 };
        assert_eq!(chi, expected, "q={q}");
    }
}

#[test]
fn sqrt_agrees_with_squaring_table() {
    for q in [3u64, 9, 25, 27, 49, 81, 121, 125] {
        let f = FieldSpec::of_order(q).unwrap();
        let mut roots: Vec<Vec<FieldElement>> = vec![Vec::new(); q as usize];
        for x in f.elements() {
            roots[f.square(x).index() as usize].push(x);
        }
        for y in f.elements() {
            let mut want = roots[y.index() as usize].clone();
            want.sort();
            match f.sqrt(y).unwrap() {
                Some(got) => assert_eq!(got, want, "q={q} y={}", y.index()),
                None => assert!(want.is_empty()),
            }
        }
    }
}
