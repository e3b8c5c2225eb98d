use toric_np::cyclo::CycInt;
use toric_np::oracle::{
    companion_coefficients, direct_coefficients, lpoly_from_power_sums, newton_polygon_of, oracle_np, power_sums,
    toric_sum, CompletionMethod, OracleOptions, SumAlgorithm, SumOptions, SumSpec,
};
use toric_np::rat;

fn default_run(n: u32, p: u64, t: u64) -> toric_np::oracle::OracleReport {
    oracle_np(n, p, t, &OracleOptions::default()).unwrap()
}

#[test]
fn n2_p3_degree_from_six_sums() {
    // Six sums of a degree-5 L-polynomial leave e_6 = 0.
    let e = direct_coefficients(2, 3, 1, 6, SumAlgorithm::Naive, &SumOptions::default()).unwrap();
    assert!(!e[5].is_zero());
    assert!(e[6].is_zero());
}

#[test]
fn completion_agrees_with_direct_sums() {
    for (n, p) in [(2u32, 5u64), (3, 5), (2, 7)] {
        let deg = 2 * n as usize + 1;
        for t in 1..p {
            let r = default_run(n, p, t);
            assert_eq!(r.completion.method, CompletionMethod::FunctionalEquation);
            assert_eq!(r.lpoly.degree(), deg);
            let direct = direct_coefficients(n, p, t, deg, SumAlgorithm::Convolution, &SumOptions::default()).unwrap();
            assert_eq!(r.lpoly.coeffs, direct, "n={n}, p={p}, t={t}");
        }
    }
}

/// The companion's top coefficients vanish exactly when the reciprocal
/// roots pair up as β ↦ p²/β; check the relation directly on full polynomials.
#[test]
fn companion_roots_are_reflected() {
    let (n, p, t) = (2u32, 5u64, 3u64);
    let deg = 2 * n as usize + 1;
    let f = direct_coefficients(n, p, t, deg, SumAlgorithm::Convolution, &SumOptions::default()).unwrap();
    let c = companion_coefficients(n, p, t, deg, SumAlgorithm::Convolution).unwrap();
    let q2 = |j: usize| num_bigint::BigInt::from(p).pow(2 * j as u32);
    for j in 0..=deg {
        // e_j(c) · e_deg(f) = p^{2j} · e_{deg-j}(f)
        assert_eq!(&c[j] * &f[deg], f[deg - j].scale(&q2(j)), "j = {j}");
    }
}

#[test]
fn low_index_valuations_n3() {
    for p in [5u64, 11] {
        for t in 1..p {
            let r = default_run(3, p, t);
            for m in [1usize, 3, 4, 6, 7] {
                assert_eq!(r.coefficient_ords[m], Some(rat((m * (m - 1)) as i64, 6)), "p={p}, t={t}, m={m}");
            }
            assert!(r.hodge_ok);
        }
    }
}

#[test]
fn ordinary_n3_p7() {
    let r = default_run(3, 7, 1);
    let want: Vec<_> = (0..=6).map(|k| rat(k, 3)).collect();
    assert_eq!(r.polygon.slopes(), &want[..]);
    assert!(r.purity_ok);
}

/// Applying σ_j to every power sum conjugates every coefficient, which leaves
/// the valuations and hence the polygon unchanged.
#[test]
fn galois_twist_preserves_polygon() {
    let (n, p, t) = (3u32, 5u64, 2u64);
    let (sf, _) = power_sums(n, p, t, 7, 0, SumAlgorithm::Convolution, &SumOptions::default()).unwrap();
    let e = lpoly_from_power_sums(p, &sf).unwrap();
    let (base, _) = newton_polygon_of(&e, 1).unwrap();
    for j in 2..p {
        let twisted: Vec<CycInt> = sf.iter().map(|s| s.galois(j)).collect();
        let e_j = lpoly_from_power_sums(p, &twisted).unwrap();
        assert_eq!(e_j, e.iter().map(|x| x.galois(j)).collect::<Vec<_>>());
        assert_eq!(newton_polygon_of(&e_j, 1).unwrap().0, base);
        // The same twist is realized by scaling the Laurent polynomial.
        let spec = SumSpec::family(n, p, 2, t).twisted(j);
        assert_eq!(toric_sum(&spec, SumAlgorithm::Convolution).unwrap(), sf[1].galois(j));
    }
}

#[test]
fn report_serializes_with_exact_fields() {
    let r = default_run(2, 5, 1);
    let v = serde_json::to_value(&r).unwrap();
    assert_eq!(v["params"]["n"], 2);
    assert_eq!(v["hodge_ok"], true);
    assert_eq!(v["coefficient_ords"][0], serde_json::json!([0, 1]));
    assert_eq!(v["polygon"]["slopes"][1], serde_json::json!([1, 2]));
    assert!(v["lpoly"]["coeffs"][1][0].is_string());
    assert!(v["prediction_match"].is_null());
}

#[test]
fn oversized_fields_are_refused() {
    let opts = OracleOptions { algorithm: SumAlgorithm::Naive, ..Default::default() };
    assert!(oracle_np(3, 47, 1, &opts).is_err());
    assert!(oracle_np(3, 3, 1, &OracleOptions::default()).is_err());
}
