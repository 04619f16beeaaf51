//! Frozen values of S0..S3, computed once by a plain brute-force double loop
//! over `math.comb` outside this crate.

use absum::identities::{
    s0_closed, s0_direct, s1_closed, s1_direct, s2_closed, s2_direct, s3_closed, s3_direct,
    s3_direct_full, verify_all,
};
use absum::oracle::{oracle_s0, oracle_s1};
use absum::{BigInt, BigUint};

const FROZEN: &[(u64, &str, &str, &str, &str)] = &[
    (5, "1260", "3175200", "1290240", "1884960"),
    (
        10,
        "1847560",
        "6826955907200",
        "1937307074560",
        "4889648832640",
    ),
    (
        17,
        "39671305740",
        "3147624998233113895200",
        "681547842971668316160",
        "2466077155261445579040",
    ),
    (
        25,
        "3160265160943800",
        "19974551774950284233813516880000",
        "3558142250304614562257908531200",
        "16416409524645669671555608348800",
    ),
];

fn nat(s: &str) -> BigUint {
    s.parse().unwrap()
}

#[test]
fn frozen_sums() {
    for &(k, s0, s1, s2, s3) in FROZEN {
        assert_eq!(s0_direct(k), nat(s0), "S0 direct k={k}");
        assert_eq!(s0_closed(k), nat(s0), "S0 closed k={k}");
        assert_eq!(s1_direct(k), nat(s1), "S1 direct k={k}");
        assert_eq!(s1_closed(k), nat(s1), "S1 closed k={k}");
        assert_eq!(s2_direct(k), nat(s2), "S2 direct k={k}");
        assert_eq!(s2_closed(k), nat(s2), "S2 closed k={k}");
        assert_eq!(s3_direct(k), nat(s3), "S3 octant k={k}");
        assert_eq!(s3_direct_full(k), nat(s3), "S3 full k={k}");
        assert_eq!(s3_closed(k), BigInt::from(nat(s3)), "S3 closed k={k}");
    }
}

#[test]
fn oracle_matches_frozen() {
    let (k, s0, s1, _, _) = FROZEN[1];
    assert_eq!(oracle_s0(k).unwrap(), nat(s0));
    assert_eq!(oracle_s1(k).unwrap(), nat(s1));
}

#[test]
fn verify_all_mid_range() {
    for k in [3, 17, 40] {
        for r in verify_all(k) {
            assert!(r.equal, "{r:?}");
        }
    }
}

#[test]
fn s1_leaves_u64_at_k16() {
    assert!(u64::try_from(&s1_closed(15)).is_ok());
    assert!(u64::try_from(&s1_closed(16)).is_err());
}
