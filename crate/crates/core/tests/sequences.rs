use numwall::ff::{PrimeField, Residue};
use numwall::seq::*;
use proptest::prelude::*;

#[test]
fn paperfolding_formula_matches_the_morphisms() {
    let f11 = PrimeField::new(11).unwrap();
    for (level, spec) in [(1, paperfolding_level1()), (2, paperfolding_level2())] {
        let coded = spec.coded_prefix(&f11, 1 << 16);
        for (j, &v) in coded.iter().enumerate() {
            assert_eq!(
                paperfolding(level, j as u64 + 1).unwrap(),
                v as u64,
                "level {level}, index {j}"
            );
        }
    }
}

#[test]
fn compressed_codings_give_the_same_sequence() {
    let f5 = PrimeField::new(5).unwrap();
    let spec = paperfolding_level2();
    let plain = spec.coded_prefix(&f5, 4096);
    for d in [2, 4, 8, 16, 32] {
        let c = spec.compressed_to(d).unwrap();
        assert_eq!(c.coding().d(), d);
        assert_eq!(c.coded_prefix(&f5, 4096), plain);
    }
}

/// Long division of `num` (coefficients of `t^0, t^-1, ...`) by `p(t)`,
/// producing coefficients of `t^-1 .. t^-n` of `num(t) / p(t)` where `num`
/// has no positive powers.
fn divide(field: &PrimeField, num: &[Residue], poly: &Poly, n: usize) -> Vec<Residue> {
    let p = poly.coeffs();
    let m = p.len() - 1;
    let lead_inv = field.inv(p[m]).unwrap();
    // rem[i] is the coefficient of t^-i in the running remainder.
    let mut rem = vec![0; n + m + 1];
    for (i, &c) in num.iter().enumerate().take(rem.len()) {
        rem[i] = c;
    }
    // out[j] is the coefficient of t^-j in the quotient.
    let mut out = vec![0; n + 1];
    for j in m..=n + m {
        // q t^-j times the leading term cancels t^-(j - m).
        let i = j - m;
        let q = field.mul(rem[i], lead_inv);
        if let Some(slot) = out.get_mut(j) {
            *slot = q;
        }
        for (d, &pd) in p.iter().enumerate() {
            // q t^-j * pd t^d lands on t^-(j - d).
            let at = j - d;
            if at < rem.len() {
                rem[at] = field.sub(rem[at], field.mul(q, pd));
            }
        }
    }
    out[1..].to_vec()
}

/// `sum a_i p^-i` by repeated long division: `x_1 = 1/p`, `x_i = x_{i-1}/p`.
fn long_division_oracle(field: &PrimeField, a: &[Residue], poly: &Poly, n: usize) -> Vec<Residue> {
    let mut total = vec![0; n];
    let mut x = vec![1];
    for &ai in a.iter().take(n / poly.degree()) {
        let next = divide(field, &x, poly, n);
        x = std::iter::once(0).chain(next.iter().copied()).collect();
        for (t, &c) in total.iter_mut().zip(&next) {
            *t = field.add(*t, field.mul(ai, c));
        }
    }
    total
}

#[test]
fn long_division_by_hand() {
    // 1 / (t - 1) = t^-1 + t^-2 + ... over F_3.
    let f3 = PrimeField::new(3).unwrap();
    let p = Poly::new(&f3, &[-1, 1]).unwrap();
    assert_eq!(divide(&f3, &[1], &p, 5), vec![1; 5]);
    assert_eq!(
        laurent_substitute(&f3, &[1, 0, 0, 0, 0], &p, 5).unwrap(),
        vec![1; 5]
    );
}

proptest! {
    #[test]
    fn laurent_substitution_matches_long_division(
        pi in prop::sample::select(vec![2u32, 3, 5, 7, 11]),
        raw in prop::collection::vec(0i64..11, 2..5),
        lead in 1i64..11,
        a in prop::collection::vec(0u8..11, 24),
    ) {
        let field = PrimeField::new(pi).unwrap();
        prop_assume!(field.reduce(lead) != 0);
        let mut coeffs = raw;
        coeffs.push(lead);
        let poly = Poly::new(&field, &coeffs).unwrap();
        let a: Vec<Residue> = a.iter().map(|&v| v % field.modulus()).collect();
        let n = 24;
        prop_assert_eq!(
            laurent_substitute(&field, &a, &poly, n).unwrap(),
            long_division_oracle(&field, &a, &poly, n)
        );
    }

    #[test]
    fn digit_lookup_agrees_with_expansion(i in 0u64..1 << 14) {
        let spec = paperfolding_level2();
        let prefix = spec.fixed_point_prefix(i as usize + 1);
        prop_assert_eq!(fixed_point_letter(spec.morphism(), spec.start(), i), prefix[i as usize]);
    }
}
