use crate::aip::aip_decide;
use crate::aip::relax::Prepared;
use crate::identities::{satisfies, IdentitySet, Interpretation};
use crate::structures::{hom_search, singleton_name, Relation, Structure};
use crate::{Error, Result};

use super::indicator::{all_polymorphisms, indicator_structure};
use super::{Answer, MetaVerdict};

/// A decision procedure for homomorphism existence, trusted only on the
/// templates its caller promises.
pub trait UniformSolver {
    fn decide(&mut self, a: &Structure, b: &Structure) -> Result<bool>;

    /// Opens a session on a fixed pair for repeated queries in which some
    /// elements of `a` are pinned to values of `b`.
    fn session<'s>(&'s mut self, a: &'s Structure, b: &'s Structure) -> Result<Box<dyn FixingSession + 's>> {
        Ok(Box::new(Rebuild { solver: self, a, b }))
    }
}

pub trait FixingSession {
    /// Decides the pair with each `(x, v)` adding the constraint `x ↦ v`.
    fn decide_fixed(&mut self, fixed: &[(usize, usize)]) -> Result<bool>;
}

/// Default session: adds each pin as a tuple of the template's singleton
/// relation `{v}` and asks the solver again.
struct Rebuild<'s, S: ?Sized> {
    solver: &'s mut S,
    a: &'s Structure,
    b: &'s Structure,
}

impl<S: UniformSolver + ?Sized> FixingSession for Rebuild<'_, S> {
    fn decide_fixed(&mut self, fixed: &[(usize, usize)]) -> Result<bool> {
        let mut relations: Vec<Relation> = self.a.relations().to_vec();
        for &(x, v) in fixed {
            let name = singleton_name(v);
            let rel = relations
                .iter_mut()
                .find(|r| r.name() == name)
                .ok_or_else(|| Error::SignatureMismatch(format!("template has no relation {name}")))?;
            if !rel.tuples().contains(&vec![x]) {
                let mut tuples = rel.tuples().to_vec();
                tuples.push(vec![x]);
                *rel = Relation::new(name, 1, tuples);
            }
        }
        self.solver.decide(&Structure::new(self.a.size(), relations), self.b)
    }
}

/// Exact homomorphism search.
#[derive(Debug, Default, Clone, Copy)]
pub struct ExactSolver;

impl UniformSolver for ExactSolver {
    fn decide(&mut self, a: &Structure, b: &Structure) -> Result<bool> {
        Ok(hom_search(a, b, None)?.is_some())
    }

    fn session<'s>(&'s mut self, a: &'s Structure, b: &'s Structure) -> Result<Box<dyn FixingSession + 's>> {
        Ok(Box::new(SeededSearch { a, b }))
    }
}

struct SeededSearch<'s> {
    a: &'s Structure,
    b: &'s Structure,
}

impl FixingSession for SeededSearch<'_> {
    fn decide_fixed(&mut self, fixed: &[(usize, usize)]) -> Result<bool> {
        let mut seed = vec![None; self.a.size()];
        for &(x, v) in fixed {
            if seed[x].is_some_and(|w| w != v) {
                return Ok(false);
            }
            seed[x] = Some(v);
        }
        Ok(hom_search(self.a, self.b, Some(&seed))?.is_some())
    }
}

/// The affine integer relaxation ([`aip_decide`]).
#[derive(Debug, Default, Clone, Copy)]
pub struct AipSolver;

impl UniformSolver for AipSolver {
    fn decide(&mut self, a: &Structure, b: &Structure) -> Result<bool> {
        aip_decide(a, b)
    }

    fn session<'s>(&'s mut self, a: &'s Structure, b: &'s Structure) -> Result<Box<dyn FixingSession + 's>> {
        if !a.same_signature(b) {
            return Err(Error::SignatureMismatch(
                "instance and template have different signatures".into(),
            ));
        }
        match Prepared::new(a, b) {
            Ok(base) => Ok(Box::new(AipSession {
                base,
                last: None,
            })),
            Err(_) => Ok(Box::new(Rebuild { solver: self, a, b })),
        }
    }
}

/// Keeps the reduced system of the last accepted query so that queries
/// extending it by one pin only add that pin.
struct AipSession {
    base: Prepared,
    last: Option<(Vec<(usize, usize)>, Prepared)>,
}

impl FixingSession for AipSession {
    fn decide_fixed(&mut self, fixed: &[(usize, usize)]) -> Result<bool> {
        let (mut state, rest) = match &self.last {
            Some((prefix, state)) if fixed.starts_with(prefix) => (state.clone(), &fixed[prefix.len()..]),
            _ => (self.base.clone(), fixed),
        };
        let overflow = || Error::Precondition("integer overflow in the affine relaxation".into());
        state.fix(rest).map_err(|_| overflow())?;
        let answer = state.feasible().map_err(|_| overflow())?;
        if answer {
            self.last = Some((fixed.to_vec(), state));
        }
        Ok(answer)
    }
}

/// Runs the solver on the indicator of `Σ2 ∪ Δ` and, on acceptance, fixes
/// the elements of the indicator one at a time, in ascending order, to the
/// first value the solver still accepts. Elements already pinned by the
/// idempotence constraints keep their value. The returned witness is not
/// checked.
pub fn pcreameta_generic<S: UniformSolver + ?Sized>(
    b: &Structure,
    sigma2: &IdentitySet,
    solver: &mut S,
) -> Result<MetaVerdict> {
    let sigma = sigma2.with_idempotence();
    let ind = indicator_structure(b, &sigma)?;
    let n = b.size();
    let mut pinned = vec![None; ind.instance.size()];
    for v in (0..n).rev() {
        let rel = ind.instance.relation(&singleton_name(v)).expect("indicator relation");
        for t in rel.tuples() {
            pinned[t[0]] = Some(v);
        }
    }
    let mut session = solver.session(&ind.instance, &ind.template)?;
    if !session.decide_fixed(&[])? {
        return Ok(MetaVerdict::no());
    }
    let mut fixed: Vec<(usize, usize)> = Vec::with_capacity(pinned.len());
    for (x, pin) in pinned.iter().enumerate() {
        if let Some(v) = pin {
            fixed.push((x, *v));
            continue;
        }
        let mut accepted = false;
        for v in 0..n {
            fixed.push((x, v));
            if session.decide_fixed(&fixed)? {
                accepted = true;
                break;
            }
            fixed.pop();
        }
        if !accepted {
            return Ok(MetaVerdict {
                answer: Answer::No,
                witness: None,
                promise_violation: true,
            });
        }
    }
    let map: Vec<usize> = fixed.iter().map(|&(_, v)| v).collect();
    Ok(MetaVerdict::yes(ind.extract(&map)))
}

/// [`pcreameta_generic`] followed by checking that the witness satisfies
/// `Σ2` and consists of polymorphisms; a failed check gives "no" with the
/// promise-violation flag.
pub fn pmeta_generic<S: UniformSolver + ?Sized>(
    b: &Structure,
    sigma2: &IdentitySet,
    solver: &mut S,
) -> Result<MetaVerdict> {
    let verdict = pcreameta_generic(b, sigma2, solver)?;
    let Some(witness) = &verdict.witness else {
        return Ok(verdict);
    };
    if satisfies(witness, sigma2)? && all_polymorphisms(witness, b)? {
        Ok(verdict)
    } else {
        Ok(MetaVerdict {
            answer: Answer::No,
            witness: None,
            promise_violation: true,
        })
    }
}

/// Separates structures with an abelian heap polymorphism (answer yes)
/// from structures without a Maltsev polymorphism (answer no), using the
/// affine relaxation as the solver. A returned witness is always a Maltsev
/// polymorphism.
pub fn pmeta_abheap_maltsev(b: &Structure) -> Result<MetaVerdict> {
    pmeta_generic(b, &IdentitySet::maltsev(), &mut AipSolver)
}

/// Checks that `witness` interprets `sigma` by polymorphisms of `b`, then
/// decides `a → b` with the solver.
pub fn uniform_solve_via_witness<S: UniformSolver + ?Sized>(
    a: &Structure,
    b: &Structure,
    witness: &Interpretation,
    sigma: &IdentitySet,
    solver: &mut S,
) -> Result<bool> {
    if !satisfies(witness, sigma)? {
        return Err(Error::Precondition("witness does not satisfy the identities".into()));
    }
    if !all_polymorphisms(witness, b)? {
        return Err(Error::Precondition("witness operations are not all polymorphisms".into()));
    }
    solver.decide(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::meta::{has_polymorphism, is_maltsev};
    use crate::OperationTable;

    struct Yes;

    impl UniformSolver for Yes {
        fn decide(&mut self, _: &Structure, _: &Structure) -> Result<bool> {
            Ok(true)
        }
    }

    fn nand() -> Structure {
        Structure::new(2, vec![Relation::new("R", 2, vec![vec![0, 0], vec![0, 1], vec![1, 0]])])
    }

    fn z4() -> Structure {
        Structure::new(
            4,
            vec![
                Relation::new("R", 2, (0..4).map(|x| vec![x, (x + 1) % 4]).collect()),
                Relation::new("S", 1, vec![vec![0], vec![2]]),
            ],
        )
    }

    #[test]
    fn abelian_heap_pipeline() {
        let v = pmeta_abheap_maltsev(&z4()).unwrap();
        assert!(v.is_yes());
        let m = &v.witness.unwrap()["m"];
        assert!(is_maltsev(m).unwrap());
        assert!(m.is_polymorphism_of(&z4()).unwrap());
        assert!(!pmeta_abheap_maltsev(&nand()).unwrap().is_yes());
        let one = Structure::new(1, vec![Relation::new("R", 2, vec![vec![0, 0]])]);
        assert!(pmeta_abheap_maltsev(&one).unwrap().is_yes());
    }

    #[test]
    fn adversarial_solver_is_caught() {
        let v = pmeta_generic(&nand(), &IdentitySet::maltsev(), &mut Yes).unwrap();
        assert!(!v.is_yes());
        assert!(v.promise_violation);
        let raw = pcreameta_generic(&nand(), &IdentitySet::maltsev(), &mut Yes).unwrap();
        assert!(raw.is_yes());
    }

    #[test]
    fn exact_solver_matches_indicator() {
        for code in 0..16u32 {
            let tuples: Vec<Vec<usize>> = (0..4)
                .filter(|i| code >> i & 1 == 1)
                .map(|i| vec![i % 2, i / 2])
                .collect();
            let b = Structure::new(2, vec![Relation::new("R", 2, tuples)]);
            let sigma = IdentitySet::maltsev();
            let exact = pmeta_generic(&b, &sigma, &mut ExactSolver).unwrap();
            let expected = has_polymorphism(&b, &sigma.with_idempotence()).unwrap();
            assert_eq!(exact.is_yes(), expected.is_yes(), "relation code {code}");
            let rebuilt = pmeta_generic(&b, &sigma, &mut Rebuilding).unwrap();
            assert_eq!(rebuilt.is_yes(), expected.is_yes());
        }
    }

    struct Rebuilding;

    impl UniformSolver for Rebuilding {
        fn decide(&mut self, a: &Structure, b: &Structure) -> Result<bool> {
            ExactSolver.decide(a, b)
        }
    }

    #[test]
    fn witness_is_checked_before_solving() {
        let b = z4();
        let a = Structure::new(2, vec![
            Relation::new("R", 2, vec![vec![0, 1]]),
            Relation::new("S", 1, vec![vec![0]]),
        ]);
        let mut w = Interpretation::new();
        w.insert(
            "m".into(),
            OperationTable::from_fn(4, 3, |x| (x[0] + 4 - x[1] + x[2]) % 4).unwrap(),
        );
        let sigma = IdentitySet::maltsev();
        assert!(uniform_solve_via_witness(&a, &b, &w, &sigma, &mut ExactSolver).unwrap());
        w.insert("m".into(), OperationTable::projection(4, 3, 0).unwrap());
        assert!(matches!(
            uniform_solve_via_witness(&a, &b, &w, &sigma, &mut ExactSolver),
            Err(Error::Precondition(_))
        ));
    }
}
