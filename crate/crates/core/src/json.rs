//! JSON file formats. Rationals are `"p/q"` strings, integers are numbers
//! when they fit in 64 bits and decimal strings otherwise. Parsing
//! re-validates every invariant the constructors enforce.

use serde::de::{DeserializeOwned, Error as _};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::automorphism::{octant_root_index, AutLetter, Point, Word};
use crate::derivation::{AlgebraElement, HomogeneousComponent};
use crate::error::{Error, Result};
use crate::generators::{GeneratorPackage, TwoRootWitness, RayConstruction, LieClosure, GeneratorFamily, Construction};
use crate::lattice::{Cone, LatticeTag, LatticeVector};
use crate::roots::RootDatum;
use crate::serial::Rat;
use crate::transitivity::{ConditionReport, SpecDerivation, TransitivitySpec};
use crate::Rational;

/// Pretty JSON with a trailing newline.
pub fn to_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn from_str<T: DeserializeOwned>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeDoc {
    rank: usize,
    lattice: LatticeTag,
    rays: Vec<LatticeVector>,
}

impl Serialize for Cone {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ConeDoc { rank: self.rank(), lattice: self.lattice(), rays: self.rays().to_vec() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Cone {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = ConeDoc::deserialize(d)?;
        Cone::new(doc.rank, doc.lattice, doc.rays).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    m: LatticeVector,
    c: Rat,
}

impl Serialize for AlgebraElement<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermDoc> = self.terms().map(|(m, c)| TermDoc { m: m.clone(), c: Rat(c.clone()) }).collect();
        #[derive(Serialize)]
        struct Doc {
            rank: usize,
            terms: Vec<TermDoc>,
        }
        Doc { rank: self.rank(), terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AlgebraElement<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            rank: usize,
            terms: Vec<TermDoc>,
        }
        let doc = Doc::deserialize(d)?;
        if let Some(t) = doc.terms.iter().find(|t| t.m.rank() != doc.rank) {
            return Err(D::Error::custom(format!("exponent {} has rank {}, expected {}", t.m, t.m.rank(), doc.rank)));
        }
        Ok(AlgebraElement::from_terms(doc.rank, doc.terms.into_iter().map(|t| (t.m, t.c.0))))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentDoc {
    lambda: Rat,
    rho: LatticeVector,
    e: LatticeVector,
}

impl Serialize for HomogeneousComponent<Rational> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ComponentDoc { lambda: Rat(self.lambda.clone()), rho: self.rho.clone(), e: self.e.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HomogeneousComponent<Rational> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = ComponentDoc::deserialize(d)?;
        if doc.rho.rank() != doc.e.rank() {
            return Err(D::Error::custom("rho and e have different ranks"));
        }
        Ok(HomogeneousComponent::new(doc.lambda.0, doc.rho, doc.e))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum LetterDoc {
    RootFlow { component: HomogeneousComponent<Rational>, t: Rat },
    ReplicaFlow { component: HomogeneousComponent<Rational>, kernel: AlgebraElement<Rational>, t: Rat },
    Torus { rho: LatticeVector, lambda: Rat },
    Permutation { perm: Vec<usize> },
    Linear { matrix: Vec<Vec<Rat>> },
    Translation { vector: Vec<Rat> },
}

fn rats(v: &[Rational]) -> Vec<Rat> {
    v.iter().cloned().map(Rat).collect()
}

fn unrats(v: Vec<Rat>) -> Vec<Rational> {
    v.into_iter().map(|x| x.0).collect()
}

impl Serialize for AutLetter {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let doc = match self.clone() {
            AutLetter::RootFlow { component, t } => LetterDoc::RootFlow { component, t: Rat(t) },
            AutLetter::ReplicaFlow { component, kernel, t } => LetterDoc::ReplicaFlow { component, kernel, t: Rat(t) },
            AutLetter::Torus { rho, lambda } => LetterDoc::Torus { rho, lambda: Rat(lambda) },
            AutLetter::Permutation(perm) => LetterDoc::Permutation { perm },
            AutLetter::Linear(m) => LetterDoc::Linear { matrix: m.iter().map(|r| rats(r)).collect() },
            AutLetter::Translation(v) => LetterDoc::Translation { vector: rats(&v) },
        };
        doc.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AutLetter {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let letter = match LetterDoc::deserialize(d)? {
            LetterDoc::RootFlow { component, t } => AutLetter::RootFlow { component, t: t.0 },
            LetterDoc::ReplicaFlow { component, kernel, t } => AutLetter::ReplicaFlow { component, kernel, t: t.0 },
            LetterDoc::Torus { rho, lambda } => AutLetter::Torus { rho, lambda: lambda.0 },
            LetterDoc::Permutation { perm } => AutLetter::Permutation(perm),
            LetterDoc::Linear { matrix } => AutLetter::Linear(matrix.into_iter().map(unrats).collect()),
            LetterDoc::Translation { vector } => AutLetter::Translation(unrats(vector)),
        };
        match &letter {
            AutLetter::RootFlow { component, .. } | AutLetter::ReplicaFlow { component, .. } => {
                octant_root_index(component).map_err(D::Error::custom)?;
            }
            AutLetter::Permutation(_) | AutLetter::Linear(_) => {
                letter.inverse().map_err(D::Error::custom)?;
            }
            _ => {}
        }
        Ok(letter)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.letters().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Vec::<AutLetter>::deserialize(d).map(Word)
    }
}

/// Points of `A^n` as rows of rationals.
pub fn points_to_json(points: &[Point<Rational>]) -> Result<String> {
    let rows: Vec<Vec<Rat>> = points.iter().map(|p| rats(&p.coords)).collect();
    to_string(&rows)
}

pub fn points_from_json(s: &str) -> Result<Vec<Point<Rational>>> {
    let rows: Vec<Vec<Rat>> = from_str(s)?;
    Ok(rows.into_iter().map(|r| Point::affine(unrats(r))).collect())
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    cone: Cone,
    derivations: Vec<SpecDerivation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b1: Option<AlgebraElement<Rational>>,
    #[serde(default)]
    movers: Vec<RootDatum>,
}

impl Serialize for TransitivitySpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecDoc {
            cone: self.cone().clone(),
            derivations: self.derivations().to_vec(),
            b1: self.b1().cloned(),
            movers: self.movers().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TransitivitySpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = SpecDoc::deserialize(d)?;
        TransitivitySpec::new(doc.cone, doc.derivations, doc.b1, doc.movers).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PackageDoc {
    construction: Construction,
    cone: Cone,
    letters: Vec<GeneratorFamily>,
    spec: Option<TransitivitySpec>,
    condition: Option<ConditionReport>,
    witnesses: Vec<TwoRootWitness>,
    lie_certificate: Option<LieClosure>,
    toric: Vec<RayConstruction>,
    notes: Vec<String>,
}

impl Serialize for GeneratorPackage {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let p = self.clone();
        PackageDoc {
            construction: p.construction,
            cone: p.cone,
            letters: p.letters,
            spec: p.spec,
            condition: p.condition,
            witnesses: p.witnesses,
            lie_certificate: p.lie_certificate,
            toric: p.toric,
            notes: p.notes,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneratorPackage {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let p = PackageDoc::deserialize(d)?;
        let package = GeneratorPackage {
            construction: p.construction,
            cone: p.cone,
            letters: p.letters,
            spec: p.spec,
            condition: p.condition,
            witnesses: p.witnesses,
            lie_certificate: p.lie_certificate,
            toric: p.toric,
            notes: p.notes,
        };
        package.validate().map_err(D::Error::custom)?;
        Ok(package)
    }
}
