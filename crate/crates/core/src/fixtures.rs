//! Built-in instances, feasibility witnesses and frozen certificates.
//!
//! `unicast11` and `groupcast6` are the two diamond instances: both have
//! Shannon bound 2/5, Zhang-Yeung bound 11/28 and linear capacity 5/13.
//! `fig7` is a no-overlapping-cycle instance with conflict distance 3 and
//! `fig4e` is a diamond with two pendant edges at conflict distance 2. The
//! `toy-*` instances are small enough for the exhaustive oracle. Every
//! message is desired somewhere; a message nobody decodes would carry no
//! entropy in the LP while a linear scheme still has to precode it.

use crate::instance::{Destination, Instance, InstanceError};
use crate::lp::EntropyProfile;
use crate::set::MessageSet;
use crate::{ratio, Rational};

pub const FIXTURE_NAMES: &[&str] = &[
    "unicast11",
    "groupcast6",
    "fig7",
    "fig4e",
    "toy-single",
    "toy-pair",
    "toy-complete3",
    "toy-delta1",
    "toy-triangle",
];

/// Fixtures with at most five messages, used for oracle cross-checks.
pub const TOY_NAMES: &[&str] = &["toy-single", "toy-pair", "toy-complete3", "toy-delta1", "toy-triangle"];

pub fn builtin_fixture(name: &str) -> Result<Instance, InstanceError> {
    let u = |w: u32, i: &[u32]| Destination::unicast(w, i.iter().copied());
    let (n, dests) = match name {
        "unicast11" => (
            11,
            vec![
                u(1, &[4, 5]),
                u(2, &[5]),
                u(3, &[6]),
                u(4, &[1]),
                u(5, &[2]),
                u(6, &[2, 3]),
                u(7, &[1, 3]),
                u(8, &[4, 6]),
                u(9, &[2, 4]),
                u(10, &[3, 4]),
                u(11, &[3, 5]),
            ],
        ),
        "groupcast6" => (
            6,
            vec![
                u(1, &[4, 5]),
                u(1, &[2, 4]),
                u(2, &[5]),
                u(3, &[]),
                u(4, &[]),
                u(5, &[2]),
                u(6, &[1, 3]),
                u(6, &[2, 3]),
                u(6, &[3, 4]),
                u(6, &[3, 5]),
            ],
        ),
        // Six-cycle 1..6 with a fork 1-7-8, plus a conflict-free set {9,10}.
        "fig7" => (
            11,
            vec![
                u(1, &[4]),
                u(2, &[5]),
                u(8, &[2]),
                u(9, &[1, 2]),
                u(9, &[2, 3]),
                u(10, &[3, 4]),
                u(10, &[4, 5]),
                u(11, &[5, 6]),
                u(11, &[6, 1]),
                u(9, &[1, 7]),
                u(10, &[7, 8]),
                u(11, &[9, 10]),
                u(3, &[]),
                u(4, &[]),
                u(5, &[]),
                u(6, &[]),
                u(7, &[]),
            ],
        ),
        // Diamond 2-3-4-5 (shared edge 3-4) with pendant edges 1-2 and 5-6.
        "fig4e" => (
            7,
            vec![
                u(1, &[3]),
                u(6, &[4]),
                u(7, &[1, 2]),
                u(7, &[2, 3]),
                u(7, &[2, 4]),
                u(7, &[3, 4]),
                u(7, &[3, 5]),
                u(7, &[4, 5]),
                u(7, &[5, 6]),
                u(2, &[]),
                u(3, &[]),
                u(4, &[]),
                u(5, &[]),
            ],
        ),
        "toy-single" => (1, vec![u(1, &[])]),
        "toy-pair" => (2, vec![u(1, &[2]), u(2, &[1])]),
        "toy-complete3" => (3, vec![u(1, &[]), u(2, &[]), u(3, &[])]),
        "toy-delta1" => (3, vec![u(1, &[2, 3]), u(2, &[3]), u(3, &[1])]),
        "toy-triangle" => (4, vec![u(4, &[1, 2]), u(4, &[2, 3]), u(4, &[1, 3]), u(1, &[2]), u(2, &[]), u(3, &[])]),
        other => return Err(InstanceError::UnknownFixture(other.to_string())),
    };
    Instance::new(n, dests, name)
}

fn listed_profile(n: usize, base: &[(usize, Rational)], listed: &[(&[u32], Rational)]) -> EntropyProfile {
    EntropyProfile::from_fn(n, |s: MessageSet| {
        if s.is_empty() {
            return Rational::from_integer(0);
        }
        if let Some((_, v)) = listed.iter().find(|(ids, _)| MessageSet::from_ids(ids.iter().copied()) == s) {
            return *v;
        }
        base.iter().find(|(k, _)| *k == s.len()).map(|(_, v)| *v).unwrap_or(Rational::from_integer(1))
    })
}

/// Polymatroid witness for `unicast11` at rate 2/5.
pub fn shannon_witness_unicast11() -> EntropyProfile {
    let (a, b, c) = (ratio(2, 5), ratio(3, 5), ratio(4, 5));
    let listed: Vec<(&[u32], Rational)> = vec![
        (&[1, 3], b),
        (&[2, 3], b),
        (&[2, 4], b),
        (&[3, 4], b),
        (&[3, 5], b),
        (&[4, 5], b),
        (&[4, 6], b),
        (&[1, 2, 3], c),
        (&[1, 3, 5], c),
        (&[1, 3, 4], c),
        (&[2, 3, 4], c),
        (&[3, 4, 5], c),
        (&[2, 3, 5], c),
        (&[2, 4, 5], c),
        (&[3, 4, 6], c),
        (&[2, 4, 6], c),
        (&[4, 5, 6], c),
        (&[2, 3, 4, 5], c),
    ];
    listed_profile(11, &[(1, a), (2, c)], &listed)
}

/// Polymatroid witness for `groupcast6` at rate 2/5.
pub fn shannon_witness_groupcast6() -> EntropyProfile {
    let (a, b, c) = (ratio(2, 5), ratio(3, 5), ratio(4, 5));
    let listed: Vec<(&[u32], Rational)> = vec![
        (&[1, 3], b),
        (&[2, 3], b),
        (&[2, 4], b),
        (&[3, 4], b),
        (&[3, 5], b),
        (&[4, 5], b),
        (&[1, 2, 3], c),
        (&[1, 3, 5], c),
        (&[1, 3, 4], c),
        (&[2, 3, 4], c),
        (&[3, 4, 5], c),
        (&[2, 3, 5], c),
        (&[2, 4, 5], c),
        (&[2, 3, 4, 5], c),
    ];
    listed_profile(6, &[(1, a), (2, c)], &listed)
}

pub const CERTIFICATE_NAMES: &[&str] = &[
    "cert-unicast11-zy-11-28",
    "cert-unicast11-ingleton-5-13",
    "cert-groupcast6-zy-11-28",
    "cert-groupcast6-ingleton-5-13",
];

/// Frozen certificate text together with the fixture it refers to.
pub fn builtin_certificate_text(name: &str) -> Option<(&'static str, &'static str)> {
    match name {
        "cert-unicast11-zy-11-28" => Some(("unicast11", CERT_UNICAST11_ZY)),
        "cert-unicast11-ingleton-5-13" => Some(("unicast11", CERT_UNICAST11_INGLETON)),
        "cert-groupcast6-zy-11-28" => Some(("groupcast6", CERT_GROUPCAST6_ZY)),
        "cert-groupcast6-ingleton-5-13" => Some(("groupcast6", CERT_GROUPCAST6_INGLETON)),
        _ => None,
    }
}

const CERT_UNICAST11_ZY: &str = "\
# chain W1 - W3 - W{4,5}, weight 2
submod {1,3} {3,4,5} 2
mono {1,4,5} {1,3,4,5} 2
decode 1 {4,5} 2
interf 7 2
# chain W6 - W4 - W{2,3}, weight 2
submod {4,6} {2,3,4} 2
mono {2,3,6} {2,3,4,6} 2
decode 6 {2,3} 2
interf 8 2
# diamond: both Zhang-Yeung orientations, weight 1/2 each
zy {2,4,5} {2,3,5} {2,3,4} {3,4,5} 1/2
zy {2,3,5} {2,4,5} {2,3,4} {3,4,5} 1/2
interf 9 2
interf 10 3
interf 11 2
mono {2,5} {2,4,5} 1/2
mono {2,5} {2,3,5} 1/2
decode 3 {} 9/2
decode 4 {} 9/2
decode 5 {2} 2
decode 2 {} 2
claims R <= 11/28
";

const CERT_UNICAST11_INGLETON: &str = "\
submod {1,3} {3,4,5} 1
mono {1,4,5} {1,3,4,5} 1
decode 1 {4,5} 1
interf 7 1
submod {4,6} {2,3,4} 1
mono {2,3,6} {2,3,4,6} 1
decode 6 {2,3} 1
interf 8 1
ingleton {2} {5} {3} {4} 1
interf 9 1
interf 10 1
interf 11 1
decode 3 {} 2
decode 4 {} 2
decode 5 {2} 1
decode 2 {} 1
claims R <= 5/13
";

const CERT_GROUPCAST6_ZY: &str = "\
# chains W1 - W3 - W{4,5} and W1 - W3 - W{2,4}, weight 2
submod {1,3} {3,4,5} 2
mono {1,4,5} {1,3,4,5} 2
decode 1 {4,5} 2
submod {1,3} {2,3,4} 2
mono {1,2,4} {1,2,3,4} 2
decode 2 {2,4} 2
interf 7 4
zy {2,4,5} {2,3,5} {2,3,4} {3,4,5} 1/2
zy {2,3,5} {2,4,5} {2,3,4} {3,4,5} 1/2
interf 9 3
interf 8 2
interf 10 2
mono {2,5} {2,4,5} 1/2
mono {2,5} {2,3,5} 1/2
decode 4 {} 13/2
decode 5 {} 5/2
decode 6 {2} 2
decode 3 {} 2
claims R <= 11/28
";

const CERT_GROUPCAST6_INGLETON: &str = "\
submod {1,3} {3,4,5} 1
mono {1,4,5} {1,3,4,5} 1
decode 1 {4,5} 1
submod {1,3} {2,3,4} 1
mono {1,2,4} {1,2,3,4} 1
decode 2 {2,4} 1
interf 7 2
ingleton {2} {5} {3} {4} 1
interf 8 1
interf 9 1
interf 10 1
decode 4 {} 3
decode 5 {} 1
decode 6 {2} 1
decode 3 {} 1
claims R <= 5/13
";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_builds() {
        for name in FIXTURE_NAMES {
            let inst = builtin_fixture(name).unwrap();
            assert_eq!(inst.label(), *name);
            assert!(inst.max_interferers() <= 2, "{name}");
            for w in inst.all_messages().iter() {
                assert!(inst.destinations().iter().any(|d| d.desired.contains(w)), "{name}: W{w} is never desired");
            }
        }
    }

    #[test]
    fn unicast_flags() {
        assert!(builtin_fixture("unicast11").unwrap().is_unicast());
        assert!(!builtin_fixture("groupcast6").unwrap().is_unicast());
        let g = builtin_fixture("groupcast6").unwrap();
        assert_eq!(g.destinations().len(), 10);
    }

    #[test]
    fn unknown_fixture_is_an_error() {
        assert_eq!(builtin_fixture("nope"), Err(InstanceError::UnknownFixture("nope".into())));
    }

    #[test]
    fn toys_are_small() {
        for name in TOY_NAMES {
            assert!(builtin_fixture(name).unwrap().message_count() <= 5);
        }
    }

    #[test]
    fn witness_has_listed_values() {
        let w = shannon_witness_unicast11();
        assert_eq!(w.get(MessageSet::from_ids([4, 6])), ratio(3, 5));
        assert_eq!(w.get(MessageSet::from_ids([1, 6])), ratio(4, 5));
        assert_eq!(w.get(MessageSet::from_ids([1, 2, 4])), Rational::from_integer(1));
        assert_eq!(w.get(MessageSet::from_ids([2, 3, 4, 5])), ratio(4, 5));
        assert_eq!(w.get(MessageSet::from_ids([1, 2, 3, 4])), Rational::from_integer(1));
        assert_eq!(w.get(MessageSet::full(11)), Rational::from_integer(1));
    }
}
