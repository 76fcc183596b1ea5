//! Randomized verification of the defining relations among permutations,
//! twists, simple splits and direct sums.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::action::GroupAction;
use crate::element::Element;
use crate::error::Result;
use crate::par::Exec;
use crate::sample::{derive_seed, Sampler};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `p_σ p_σ' = p_{σσ'}`
    PermutationProduct,
    /// `p_σ ⊕ p_σ' = p_σ''`
    PermutationSum,
    /// `τ_γ τ_γ' = τ_{γγ'}`
    TwistProduct,
    /// `(h ⊕ h') ⊕ h'' = h ⊕ (h' ⊕ h'')`
    SumAssociative,
    /// `(h₁ ⊕ h₂)(h₁' ⊕ h₂') = h₁h₁' ⊕ h₂h₂'`
    SumInterchange,
    /// `(h₁ ⊕ … ⊕ h_n) p_σ = p_σ (h_σ(1) ⊕ … ⊕ h_σ(n))`
    SumPermutation,
    /// `x_{γs} τ_γ = (τ_γ ⊕ τ_γ) x_s`
    SplitTwist,
    /// `(x_t ⊕ x_t) x_s = p_(2 3) (x_s ⊕ x_s) x_t`
    SplitSwap,
}

impl Relation {
    pub const ALL: [Relation; 8] = [
        Relation::PermutationProduct,
        Relation::PermutationSum,
        Relation::TwistProduct,
        Relation::SumAssociative,
        Relation::SumInterchange,
        Relation::SumPermutation,
        Relation::SplitTwist,
        Relation::SplitSwap,
    ];

    pub fn number(self) -> usize {
        Relation::ALL.iter().position(|r| *r == self).unwrap() + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            Relation::PermutationProduct => "permutation-product",
            Relation::PermutationSum => "permutation-sum",
            Relation::TwistProduct => "twist-product",
            Relation::SumAssociative => "sum-associative",
            Relation::SumInterchange => "sum-interchange",
            Relation::SumPermutation => "sum-permutation",
            Relation::SplitTwist => "split-twist",
            Relation::SplitSwap => "split-swap",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.number(), self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationReport {
    pub relation: Relation,
    pub instances: usize,
    pub failures: usize,
    /// Both sides of the first failing instance.
    pub first_failure: Option<(String, String)>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn random_perm<A: GroupAction>(s: &mut Sampler<A>, n: usize) -> Vec<usize> {
    let mut images: Vec<usize> = (1..=n).collect();
    images.shuffle(s.rng());
    images
}

/// Both sides of one random instance of `rel`.
fn instance<A: GroupAction>(rel: Relation, s: &mut Sampler<A>) -> Result<(Element<A>, Element<A>)> {
    let a = s.action().clone();
    Ok(match rel {
        Relation::PermutationProduct => {
            let n = s.rng().gen_range(1..=5);
            let p = random_perm(s, n);
            let q = random_perm(s, n);
            let pq: Vec<usize> = q.iter().map(|&i| p[i - 1]).collect();
            let lhs = Element::permutation(a.clone(), &p)?
                .compose(&Element::permutation(a.clone(), &q)?)?;
            (lhs, Element::permutation(a, &pq)?)
        }
        Relation::PermutationSum => {
            let n = s.rng().gen_range(1..=4);
            let k = s.rng().gen_range(1..=4);
            let p = random_perm(s, n);
            let q = random_perm(s, k);
            let joined: Vec<usize> = p.iter().copied().chain(q.iter().map(|i| i + n)).collect();
            let lhs = Element::permutation(a.clone(), &p)?
                .direct_sum(&Element::permutation(a.clone(), &q)?)?;
            (lhs, Element::permutation(a, &joined)?)
        }
        Relation::TwistProduct => {
            let g = s.group_elem();
            let h = s.group_elem();
            let lhs = Element::twist(a.clone(), g.clone())
                .compose(&Element::twist(a.clone(), h.clone()))?;
            (lhs, Element::twist(a.clone(), a.multiply(&g, &h)))
        }
        Relation::SumAssociative => {
            let pick = |s: &mut Sampler<A>| {
                let q = s.rng().gen_range(1..=2);
                let r = s.rng().gen_range(1..=2);
                s.element(q, r)
            };
            let (h, h1, h2) = (pick(s)?, pick(s)?, pick(s)?);
            (
                h.direct_sum(&h1)?.direct_sum(&h2)?,
                h.direct_sum(&h1.direct_sum(&h2)?)?,
            )
        }
        Relation::SumInterchange => {
            let dims: Vec<usize> = (0..6).map(|_| s.rng().gen_range(1..=2)).collect();
            let h1p = s.element(dims[0], dims[1])?;
            let h1 = s.element(dims[1], dims[2])?;
            let h2p = s.element(dims[3], dims[4])?;
            let h2 = s.element(dims[4], dims[5])?;
            let lhs = h1.direct_sum(&h2)?.compose(&h1p.direct_sum(&h2p)?)?;
            let rhs = h1.compose(&h1p)?.direct_sum(&h2.compose(&h2p)?)?;
            (lhs, rhs)
        }
        Relation::SumPermutation => {
            let n = s.rng().gen_range(1..=4);
            let hs = (0..n)
                .map(|_| s.group_element())
                .collect::<Result<Vec<_>>>()?;
            let sigma = random_perm(s, n);
            let p = Element::permutation(a, &sigma)?;
            let lhs = Element::direct_sum_all(&hs)?.compose(&p)?;
            let permuted: Vec<&Element<A>> = sigma.iter().map(|&i| &hs[i - 1]).collect();
            let rhs = p.compose(&Element::direct_sum_all(permuted)?)?;
            (lhs, rhs)
        }
        Relation::SplitTwist => {
            let c = s.color();
            let g = s.group_elem();
            let moved = a.apply(&g, &c)?;
            let t = Element::twist(a.clone(), g);
            let lhs = Element::simple_split(a.clone(), moved)?.compose(&t)?;
            let rhs = t.direct_sum(&t)?.compose(&Element::simple_split(a, c)?)?;
            (lhs, rhs)
        }
        Relation::SplitSwap => {
            let (c, d) = s.color_pair();
            let xs = Element::simple_split(a.clone(), c)?;
            let xt = Element::simple_split(a.clone(), d)?;
            let lhs = xt.direct_sum(&xt)?.compose(&xs)?;
            let swap = Element::permutation(a, &[1, 3, 2, 4])?;
            let rhs = swap.compose(&xs.direct_sum(&xs)?.compose(&xt)?)?;
            (lhs, rhs)
        }
    })
}

/// Checks `instances` random instances of `rel`; instance `i` draws from its
/// own stream derived from `(seed, rel, i)`, so results do not depend on the
/// execution mode.
pub fn check_relation<A: GroupAction>(
    action: &A,
    rel: Relation,
    instances: usize,
    seed: u64,
    exec: Exec,
) -> Result<RelationReport> {
    let base = derive_seed(seed, rel.number() as u64);
    let outcomes = exec.map_range(instances, |i| {
        let mut s = Sampler::new(action.clone(), derive_seed(base, i as u64));
        let (lhs, rhs) = instance(rel, &mut s)?;
        Ok(if lhs.equals(&rhs) {
            None
        } else {
            Some((lhs.to_string(), rhs.to_string()))
        })
    });
    let outcomes: Vec<Option<(String, String)>> = outcomes.into_iter().collect::<Result<_>>()?;
    let failures = outcomes.iter().filter(|o| o.is_some()).count();
    Ok(RelationReport {
        relation: rel,
        instances,
        failures,
        first_failure: outcomes.into_iter().flatten().next(),
    })
}

/// All eight relation families.
pub fn check_relations<A: GroupAction>(
    action: &A,
    instances: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<RelationReport>> {
    Relation::ALL
        .iter()
        .map(|&rel| check_relation(action, rel, instances, seed, exec))
        .collect()
}
