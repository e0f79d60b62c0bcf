//! Randomized exact soundness checking of the catalogue.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{apply, catalogue, colour_change_meta, Rule, RuleClass, RuleSite, RewriteState};
use crate::cyclo::Cyclo;
use crate::diagram::Diagram;
use crate::error::Result;
use crate::interp::interp_raw;
use crate::modp::Prime;

#[derive(Clone, Debug)]
pub struct Failure {
    pub trial: usize,
    pub diagram: Diagram,
    pub site: RuleSite,
    pub message: String,
}

#[derive(Clone, Debug)]
pub struct RuleReport {
    pub rule: String,
    pub p: u64,
    pub passed: usize,
    pub failed: usize,
    /// The failing instance with the fewest vertices.
    pub smallest_failure: Option<Failure>,
}

/// Extra factor multiplied into every rule's scalar; `one` for a real
/// check, anything else to confirm the checker notices.
fn check(rule: &Rule, d: &Diagram, site: &RuleSite, skew: &Cyclo) -> Result<bool> {
    let one = Cyclo::one(d.p);
    if rule.class == RuleClass::Meta {
        let (m, n) = d.arity();
        let hs = |k: usize| (0..k).try_fold(Diagram::identity(d.p, 0), |acc, _| acc.tensor(&Diagram::hadamard(d.p)));
        let rhs = hs(m)?.compose(d)?.compose(&hs(n)?)?;
        let a = interp_raw(&colour_change_meta(d))?;
        return Ok(a.scaled_eq(&one, &interp_raw(&rhs)?, skew));
    }
    let after = apply(&RewriteState::new(d.clone()), site)?;
    after.graph.validate()?;
    let f = &after.scalar * skew;
    Ok(interp_raw(d)?.scaled_eq(&one, &interp_raw(&after.graph)?, &f))
}

fn stream_seed(seed: u64, rule: &str, p: u64) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for b in rule.bytes().chain(p.to_le_bytes()) {
        h = (h ^ b as u64).wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Run `trials` random instances of each named rule (all rules if `names`
/// is empty) at each prime. Reports are sorted by rule name, then prime.
pub fn soundcheck(names: &[String], primes: &[Prime], trials: usize, seed: u64, skew: bool) -> Result<Vec<RuleReport>> {
    let mut rules: Vec<&Rule> = catalogue().iter().filter(|r| names.is_empty() || names.iter().any(|n| n == r.name)).collect();
    if let Some(bad) = names.iter().find(|n| !catalogue().iter().any(|r| r.name == n.as_str())) {
        return Err(crate::Error::Domain(format!("unknown rule {bad}")));
    }
    rules.sort_by_key(|r| r.name);
    let mut out = Vec::new();
    if trials == 0 {
        return Ok(out);
    }
    for rule in rules {
        for &p in primes {
            let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, rule.name, p.get()));
            let sk = if skew { -Cyclo::one(p) } else { Cyclo::one(p) };
            let mut rep = RuleReport { rule: rule.name.to_string(), p: p.get(), passed: 0, failed: 0, smallest_failure: None };
            for trial in 0..trials {
                let (d, site) = (rule.instance)(p, &mut rng);
                let message = match check(rule, &d, &site, &sk) {
                    Ok(true) => {
                        rep.passed += 1;
                        continue;
                    }
                    Ok(false) => "interpretations differ".to_string(),
                    Err(e) => e.to_string(),
                };
                rep.failed += 1;
                let smaller =
                    rep.smallest_failure.as_ref().map_or(true, |f| d.vertices.len() < f.diagram.vertices.len());
                if smaller {
                    rep.smallest_failure = Some(Failure { trial, diagram: d, site, message });
                }
            }
            out.push(rep);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skewed_factors_are_caught() {
        let p = Prime::new(3).unwrap();
        let names = vec!["fusion".to_string(), "char".to_string()];
        let good = soundcheck(&names, &[p], 5, 0, false).unwrap();
        assert!(good.iter().all(|r| r.failed == 0 && r.passed == 5));
        assert_eq!(good[0].rule, "char");
        let bad = soundcheck(&names, &[p], 5, 0, true).unwrap();
        // zero instances accept any factor
        assert!(bad.iter().all(|r| r.failed > 0 && r.smallest_failure.is_some()));
        assert!(soundcheck(&names, &[p], 0, 0, false).unwrap().is_empty());
        assert!(soundcheck(&["nope".to_string()], &[p], 1, 0, false).is_err());
    }
}
