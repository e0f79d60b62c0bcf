use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use zxp::rules::catalogue;
use zxp::Prime;

#[test]
fn every_rule_is_exactly_sound() {
    let mut bad = Vec::new();
    for p in [3u64, 5, 7] {
        let p = Prime::new(p).unwrap();
        for rule in catalogue() {
            let mut rng = ChaCha8Rng::seed_from_u64(1000 + p.get());
            for t in 0..30 {
                let (d, site) = (rule.instance)(p, &mut rng);
                match rule.check(&d, &site) {
                    Ok(true) => {}
                    Ok(false) => {
                        bad.push(format!("{} p={} trial {}: unsound", rule.name, p, t));
                        break;
                    }
                    Err(e) => {
                        bad.push(format!("{} p={} trial {}: {}", rule.name, p, t, e));
                        break;
                    }
                }
            }
        }
    }
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}
