//! Closed subgroups K ⊆ O(n) acting transitively on the spheres about 0.
//!
//! Each entry pairs an identity component K⁰ with the finite extensions F
//! for which K = K⁰F is still transitive. Only K⁰ matters for spherical
//! functions, so only the classical identity components carry samplers.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::GroupSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseId {
    #[serde(rename = "(1)")]
    SpecialOrthogonal,
    #[serde(rename = "(2)(i)")]
    SpecialUnitary,
    #[serde(rename = "(2)(ii)")]
    Unitary,
    #[serde(rename = "(3)(i)")]
    Symplectic,
    #[serde(rename = "(3)(ii)")]
    SymplecticCircle,
    #[serde(rename = "(3)(iii)")]
    SymplecticSp1,
    #[serde(rename = "(4)")]
    G2,
    #[serde(rename = "(5)")]
    Spin7,
    #[serde(rename = "(6)")]
    Spin9,
}

impl CaseId {
    pub const ALL: [CaseId; 9] = [
        CaseId::SpecialOrthogonal,
        CaseId::SpecialUnitary,
        CaseId::Unitary,
        CaseId::Symplectic,
        CaseId::SymplecticCircle,
        CaseId::SymplecticSp1,
        CaseId::G2,
        CaseId::Spin7,
        CaseId::Spin9,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CaseId::SpecialOrthogonal => "(1)",
            CaseId::SpecialUnitary => "(2)(i)",
            CaseId::Unitary => "(2)(ii)",
            CaseId::Symplectic => "(3)(i)",
            CaseId::SymplecticCircle => "(3)(ii)",
            CaseId::SymplecticSp1 => "(3)(iii)",
            CaseId::G2 => "(4)",
            CaseId::Spin7 => "(5)",
            CaseId::Spin9 => "(6)",
        }
    }

    pub fn n_predicate(self) -> &'static str {
        match self {
            CaseId::SpecialOrthogonal => "n>1",
            CaseId::SpecialUnitary | CaseId::Unitary => "n=2m",
            CaseId::Symplectic | CaseId::SymplecticCircle | CaseId::SymplecticSp1 => "n=4m",
            CaseId::G2 => "n=7",
            CaseId::Spin7 => "n=8",
            CaseId::Spin9 => "n=16",
        }
    }

    /// The identity component this case contributes in R^n, if any.
    pub fn identity_component(self, n: usize) -> Option<IdentityComponent> {
        use IdentityComponent as K;
        match self {
            CaseId::SpecialOrthogonal => (n > 1).then_some(K::SO(n)),
            // SU(1) is trivial and moves nothing
            CaseId::SpecialUnitary => (n.is_multiple_of(2) && n >= 4).then_some(K::SU(n / 2)),
            CaseId::Unitary => (n.is_multiple_of(2) && n >= 2).then_some(K::U(n / 2)),
            CaseId::Symplectic => (n.is_multiple_of(4) && n >= 4).then_some(K::Sp(n / 4)),
            CaseId::SymplecticCircle => (n.is_multiple_of(4) && n >= 4).then_some(K::SpU1(n / 4)),
            CaseId::SymplecticSp1 => (n.is_multiple_of(4) && n >= 4).then_some(K::SpSp1(n / 4)),
            CaseId::G2 => (n == 7).then_some(K::G2),
            CaseId::Spin7 => (n == 8).then_some(K::Spin7),
            CaseId::Spin9 => (n == 16).then_some(K::Spin9),
        }
    }

    pub fn admits(self, n: usize) -> bool {
        self.identity_component(n).is_some()
    }

    pub fn extensions(self) -> &'static [Extension] {
        use Extension as E;
        match self {
            CaseId::SpecialOrthogonal | CaseId::G2 => &[E::Trivial, E::MinusIdentity],
            CaseId::SpecialUnitary => &[E::Cyclic, E::Dihedral],
            CaseId::Unitary => &[E::Trivial, E::Conjugation],
            CaseId::Symplectic => &[
                E::Cyclic,
                E::BinaryDihedral,
                E::BinaryTetrahedral,
                E::BinaryOctahedral,
                E::BinaryIcosahedral,
            ],
            CaseId::SymplecticCircle => &[E::Trivial, E::QuaternionJ],
            CaseId::SymplecticSp1 | CaseId::Spin7 | CaseId::Spin9 => &[E::Trivial],
        }
    }
}

/// K⁰ in the classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityComponent {
    SO(usize),
    SU(usize),
    U(usize),
    Sp(usize),
    SpU1(usize),
    SpSp1(usize),
    G2,
    Spin7,
    Spin9,
    /// Spin(k) for k ∉ {7, 9}; never transitive on a sphere in this table.
    Spin(usize),
}

impl IdentityComponent {
    /// The sampleable group realizing this K⁰, when one exists.
    pub fn group_spec(self) -> Result<GroupSpec> {
        match self {
            IdentityComponent::SO(n) => GroupSpec::so(n),
            IdentityComponent::SU(m) => GroupSpec::su(m),
            IdentityComponent::U(m) => GroupSpec::u(m),
            IdentityComponent::Sp(m) => GroupSpec::sp(m),
            other => Err(Error::NoSampler(other.to_string())),
        }
    }
}

impl fmt::Display for IdentityComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdentityComponent::SO(n) => write!(f, "SO({n})"),
            IdentityComponent::SU(m) => write!(f, "SU({m})"),
            IdentityComponent::U(m) => write!(f, "U({m})"),
            IdentityComponent::Sp(m) => write!(f, "Sp({m})"),
            IdentityComponent::SpU1(m) => write!(f, "Sp({m})U(1)"),
            IdentityComponent::SpSp1(m) => write!(f, "Sp({m})Sp(1)"),
            IdentityComponent::G2 => write!(f, "G2"),
            IdentityComponent::Spin7 => write!(f, "Spin(7)"),
            IdentityComponent::Spin9 => write!(f, "Spin(9)"),
            IdentityComponent::Spin(k) => write!(f, "Spin({k})"),
        }
    }
}

/// Finite extension F in K = K⁰F.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extension {
    Trivial,
    /// {I, −I}
    MinusIdentity,
    /// Z_l, l ≥ 1 (l = 1 is the trivial extension)
    Cyclic,
    /// Z_l ∪ αZ_l
    Dihedral,
    /// complex conjugation α
    Conjugation,
    BinaryDihedral,
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
    /// quaternion scalar multiplication by j
    QuaternionJ,
}

impl Extension {
    pub fn descriptor(self) -> &'static str {
        match self {
            Extension::Trivial => "trivial",
            Extension::MinusIdentity => "±I",
            Extension::Cyclic => "Z_l",
            Extension::Dihedral => "D_l",
            Extension::Conjugation => "α",
            Extension::BinaryDihedral => "D*_l",
            Extension::BinaryTetrahedral => "T*",
            Extension::BinaryOctahedral => "O*",
            Extension::BinaryIcosahedral => "I*",
            Extension::QuaternionJ => "β",
        }
    }

    /// Whether a group with extension `other` belongs to this listed family.
    pub fn admits(self, other: Extension) -> bool {
        self == other || (self == Extension::Cyclic && other == Extension::Trivial)
    }

    /// Name of K⁰F.
    pub fn group_name(self, k0: IdentityComponent) -> String {
        match self {
            Extension::Trivial => k0.to_string(),
            Extension::MinusIdentity => match k0 {
                IdentityComponent::SO(n) => format!("O({n})"),
                _ => format!("{k0} ∪ (-I){k0}"),
            },
            Extension::Conjugation => format!("{k0} ∪ α{k0}"),
            Extension::QuaternionJ => format!("{k0} ∪ ({k0})β"),
            Extension::BinaryTetrahedral
            | Extension::BinaryOctahedral
            | Extension::BinaryIcosahedral => format!("{k0}·{}", self.descriptor()),
            Extension::Cyclic | Extension::Dihedral | Extension::BinaryDihedral => {
                format!("{k0}·{}", self.descriptor())
            }
        }
    }
}

impl Serialize for Extension {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.descriptor())
    }
}

impl<'de> Deserialize<'de> for Extension {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        [
            Extension::Trivial,
            Extension::MinusIdentity,
            Extension::Cyclic,
            Extension::Dihedral,
            Extension::Conjugation,
            Extension::BinaryDihedral,
            Extension::BinaryTetrahedral,
            Extension::BinaryOctahedral,
            Extension::BinaryIcosahedral,
            Extension::QuaternionJ,
        ]
        .into_iter()
        .find(|e| e.descriptor() == s)
        .ok_or_else(|| serde::de::Error::custom(format!("unknown extension `{s}`")))
    }
}

/// One row of the classification for a concrete ambient dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationEntry {
    pub case: CaseId,
    pub n_predicate: String,
    #[serde(rename = "K0")]
    pub identity_component: String,
    pub extensions: Vec<Extension>,
    #[serde(rename = "sampler")]
    pub sampler_available: bool,
}

impl ClassificationEntry {
    fn build(case: CaseId, k0: IdentityComponent) -> Self {
        Self {
            case,
            n_predicate: case.n_predicate().to_string(),
            identity_component: k0.to_string(),
            extensions: case.extensions().to_vec(),
            sampler_available: k0.group_spec().is_ok(),
        }
    }

    /// Names of every group K⁰F this entry covers.
    pub fn groups(&self) -> Vec<String> {
        let k0 = parse_name(&self.identity_component)
            .expect("entries carry parseable names")
            .0;
        self.extensions.iter().map(|e| e.group_name(k0)).collect()
    }
}

/// Every classification entry whose dimension predicate admits n.
pub fn transitive_groups(n: usize) -> Result<Vec<ClassificationEntry>> {
    if n <= 1 {
        return Err(Error::Domain(format!(
            "transitivity on spheres needs n ≥ 2, got {n}"
        )));
    }
    Ok(CaseId::ALL
        .iter()
        .filter_map(|case| {
            case.identity_component(n)
                .map(|k0| ClassificationEntry::build(*case, k0))
        })
        .collect())
}

/// Whether the named group appears in the classification for R^n.
///
/// Accepts the canonical names produced by [`ClassificationEntry::groups`]
/// and the common variants ("G₂", "Sp(1).U(1)", "SU(2)·Z_3", ...).
pub fn is_transitive_on_spheres(name: &str, n: usize) -> Result<bool> {
    let (k0, ext) = parse_name(name)?;
    if n <= 1 {
        return Ok(false);
    }
    Ok(CaseId::ALL.iter().any(|case| {
        case.identity_component(n) == Some(k0) && case.extensions().iter().any(|e| e.admits(ext))
    }))
}

fn normalize(name: &str) -> String {
    name.chars()
        .filter(|c| !c.is_whitespace() && *c != '·' && *c != '.')
        .map(|c| match c {
            '₂' => '2',
            '−' => '-',
            _ => c,
        })
        .collect()
}

/// Split "Prefix(k)rest" into (k, rest).
fn strip_family<'a>(s: &'a str, prefix: &str) -> Option<(usize, &'a str)> {
    let rest = s.strip_prefix(prefix)?.strip_prefix('(')?;
    let close = rest.find(')')?;
    let k = rest[..close].parse().ok()?;
    Some((k, &rest[close + 1..]))
}

fn parse_finite(suffix: &str) -> Option<Extension> {
    let index_ok = |s: &str| s == "l" || (!s.is_empty() && s.chars().all(|c| c.is_ascii_digit()));
    if suffix.is_empty() {
        return Some(Extension::Trivial);
    }
    if let Some(l) = suffix.strip_prefix("Z_") {
        return index_ok(l).then_some(Extension::Cyclic);
    }
    if let Some(l) = suffix.strip_prefix("D*_") {
        return index_ok(l).then_some(Extension::BinaryDihedral);
    }
    if let Some(l) = suffix.strip_prefix("D_") {
        return index_ok(l).then_some(Extension::Dihedral);
    }
    match suffix {
        "T*" => Some(Extension::BinaryTetrahedral),
        "O*" => Some(Extension::BinaryOctahedral),
        "I*" => Some(Extension::BinaryIcosahedral),
        _ => None,
    }
}

fn parse_name(name: &str) -> Result<(IdentityComponent, Extension)> {
    use IdentityComponent as K;
    let unknown = || Error::UnknownGroup(name.to_string());
    let s = normalize(name);

    if let Some((k, rest)) = strip_family(&s, "SO") {
        return rest
            .is_empty()
            .then_some((K::SO(k), Extension::Trivial))
            .ok_or_else(unknown);
    }
    if let Some((k, rest)) = strip_family(&s, "O") {
        return rest
            .is_empty()
            .then_some((K::SO(k), Extension::MinusIdentity))
            .ok_or_else(unknown);
    }
    if let Some((m, rest)) = strip_family(&s, "SU") {
        return match parse_finite(rest) {
            Some(e @ (Extension::Trivial | Extension::Cyclic | Extension::Dihedral)) => {
                Ok((K::SU(m), e))
            }
            _ => Err(unknown()),
        };
    }
    if let Some((m, rest)) = strip_family(&s, "U") {
        let base = format!("U({m})");
        return match rest {
            "" => Ok((K::U(m), Extension::Trivial)),
            r if r == format!("∪α{base}") => Ok((K::U(m), Extension::Conjugation)),
            _ => Err(unknown()),
        };
    }
    // "(Sp(m)U(1))∪(Sp(m)U(1))β"
    if let Some(inner) = s.strip_prefix('(') {
        if let Some((m, rest)) = strip_family(inner, "Sp") {
            let base = format!("Sp({m})U(1)");
            if rest == format!("U(1))∪({base})β") {
                return Ok((K::SpU1(m), Extension::QuaternionJ));
            }
        }
        return Err(unknown());
    }
    if let Some((m, rest)) = strip_family(&s, "Sp") {
        if let Some(tail) = rest.strip_prefix("U(1)") {
            let base = format!("Sp({m})U(1)");
            return match tail {
                "" => Ok((K::SpU1(m), Extension::Trivial)),
                t if t == format!("∪({base})β") => Ok((K::SpU1(m), Extension::QuaternionJ)),
                _ => Err(unknown()),
            };
        }
        if let Some(tail) = rest.strip_prefix("Sp(1)") {
            return tail
                .is_empty()
                .then_some((K::SpSp1(m), Extension::Trivial))
                .ok_or_else(unknown);
        }
        return match parse_finite(rest) {
            Some(
                e @ (Extension::Trivial
                | Extension::Cyclic
                | Extension::BinaryDihedral
                | Extension::BinaryTetrahedral
                | Extension::BinaryOctahedral
                | Extension::BinaryIcosahedral),
            ) => Ok((K::Sp(m), e)),
            _ => Err(unknown()),
        };
    }
    if let Some(rest) = s.strip_prefix("G2") {
        return match rest {
            "" => Ok((K::G2, Extension::Trivial)),
            "∪(-I)G2" => Ok((K::G2, Extension::MinusIdentity)),
            _ => Err(unknown()),
        };
    }
    if let Some((k, rest)) = strip_family(&s, "Spin") {
        if !rest.is_empty() {
            return Err(unknown());
        }
        let k0 = match k {
            7 => K::Spin7,
            9 => K::Spin9,
            other => K::Spin(other),
        };
        return Ok((k0, Extension::Trivial));
    }
    Err(unknown())
}

/// The sampleable identity component named by `name` (extensions are
/// dropped: spherical integrals only see K⁰).
pub fn sampler_spec(name: &str) -> Result<GroupSpec> {
    let (k0, _) = parse_name(name)?;
    k0.group_spec()
}
