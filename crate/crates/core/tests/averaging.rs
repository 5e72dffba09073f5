use flexkin_core::averaging::{average, classify_pair, midpoints, translation_invariance_check, PairSet};
use flexkin_core::families::{build_pair, random_spec, FamilyTag};
use flexkin_core::flexion::{classify_configuration, FlexionClass};
use flexkin_core::geometry::{Point2, SixConfig};
use flexkin_core::ratpoly::{int, rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn built(tag: FamilyTag, rng: &mut ChaCha8Rng) -> Option<(SixConfig, SixConfig)> {
    let (spec, _) = random_spec(tag, rng);
    let f1 = rat(rng.random_range(-15..=15), rng.random_range(1..=7));
    build_pair(&spec.with_orientation(int(1), f1).ok()?).ok()
}

#[test]
fn built_pairs_land_in_their_set() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for tag in FamilyTag::ALL {
        for _ in 0..5 {
            let Some((a, b)) = built(tag, &mut rng) else { continue };
            let class = classify_pair(&a, &b).unwrap();
            assert_eq!(class.set, tag.set(), "{tag}");
            assert_eq!(midpoints(&a, &b), midpoints(&b, &a));
        }
    }
}

#[test]
fn set_a_averages_are_first_order_flexible() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let tags = FamilyTag::ALL.into_iter().filter(|t| t.set() == PairSet::A);
    for tag in tags {
        for _ in 0..5 {
            let Some((a, b)) = built(tag, &mut rng) else { continue };
            let Ok(avg) = average(&a, &b) else { continue };
            if !avg.is_valid() {
                continue;
            }
            let r = classify_configuration(&avg.config).unwrap();
            assert_ne!(r.classification, FlexionClass::Order0, "{tag}");
        }
    }
}

#[test]
fn translating_the_pair_apart_keeps_the_average() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for k in 0..30 {
        let tag = FamilyTag::ALL[k % FamilyTag::ALL.len()];
        let Some((a, b)) = built(tag, &mut rng) else { continue };
        let t = Point2::new(rat(rng.random_range(-9..=9), 2), rat(rng.random_range(-9..=9), 3));
        assert!(translation_invariance_check(&a, &b, &t));
    }
}

#[test]
fn configurations_survive_json() {
    let cfg = SixConfig::new(std::array::from_fn(|i| Point2::new(rat(i as i64 - 2, 3), rat(7, i as i64 + 1))));
    let text = serde_json::to_string(&cfg).unwrap();
    assert!(text.contains("\"-2/3\""));
    assert_eq!(serde_json::from_str::<SixConfig>(&text).unwrap(), cfg);
}
