//! Policy-gradient agent: softmax action preferences and a value head on a
//! shared hidden layer, trained with a clipped surrogate objective over
//! fixed-length rollout batches and generalized advantage estimates.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::env::{encode_state, reset, step, EnvConfig, EnvState};
use crate::nn::{gradient_check, Adam};
use crate::skill::LearnerProfile;

use super::{action_space, PolicyGradPolicy, RecommenderPolicy, TrainConfig, TrainError};

/// Shared-trunk actor-critic: affine -> ReLU trunk feeding an action-logit
/// head and a scalar value head. Parameters are one flat vector in the
/// order trunk weights, trunk bias, policy head, policy bias, value head,
/// value bias (all row-major).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActorCritic {
    pub in_dim: usize,
    pub hidden: usize,
    pub actions: usize,
    pub params: Vec<f64>,
}

impl ActorCritic {
    pub fn n_params(in_dim: usize, hidden: usize, actions: usize) -> usize {
        hidden * in_dim + hidden + actions * hidden + actions + hidden + 1
    }

    fn w1(&self) -> usize {
        0
    }
    fn b1(&self) -> usize {
        self.hidden * self.in_dim
    }
    fn wp(&self) -> usize {
        self.b1() + self.hidden
    }
    fn bp(&self) -> usize {
        self.wp() + self.actions * self.hidden
    }
    fn wv(&self) -> usize {
        self.bp() + self.actions
    }
    fn bv(&self) -> usize {
        self.wv() + self.hidden
    }

    pub fn init(in_dim: usize, hidden: usize, actions: usize, rng: &mut impl Rng) -> Self {
        let mut net = ActorCritic {
            in_dim,
            hidden,
            actions,
            params: vec![0.0; Self::n_params(in_dim, hidden, actions)],
        };
        let s1 = (2.0 / in_dim as f64).sqrt();
        // Small policy/value head weights keep the initial policy near uniform.
        let s2 = (2.0 / hidden as f64).sqrt() * 0.1;
        for i in 0..hidden * in_dim {
            net.params[i] = gauss(rng) * s1;
        }
        let wp = net.wp();
        for i in 0..actions * hidden {
            net.params[wp + i] = gauss(rng) * s2;
        }
        let wv = net.wv();
        for i in 0..hidden {
            net.params[wv + i] = gauss(rng) * s2;
        }
        net
    }

    /// Hidden activations, logits and value for one input.
    pub fn forward(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>, f64) {
        assert_eq!(x.len(), self.in_dim);
        let p = &self.params;
        let mut hidden = vec![0.0; self.hidden];
        for h in 0..self.hidden {
            let row = self.w1() + h * self.in_dim;
            let mut z = p[self.b1() + h];
            for (i, &xi) in x.iter().enumerate() {
                z += p[row + i] * xi;
            }
            hidden[h] = z.max(0.0);
        }
        let mut logits = vec![0.0; self.actions];
        for a in 0..self.actions {
            let row = self.wp() + a * self.hidden;
            let mut z = p[self.bp() + a];
            for (h, &act) in hidden.iter().enumerate() {
                z += p[row + h] * act;
            }
            logits[a] = z;
        }
        let mut value = p[self.bv()];
        for (h, &act) in hidden.iter().enumerate() {
            value += p[self.wv() + h] * act;
        }
        (hidden, logits, value)
    }

    pub fn logits(&self, x: &[f64]) -> Vec<f64> {
        self.forward(x).1
    }

    /// Accumulate gradients for one input given dLoss/dLogits and
    /// dLoss/dValue.
    pub fn backward(
        &self,
        x: &[f64],
        hidden: &[f64],
        dlogits: &[f64],
        dvalue: f64,
        grads: &mut [f64],
    ) {
        let p = &self.params;
        for (a, &g) in dlogits.iter().enumerate() {
            let row = self.wp() + a * self.hidden;
            for (h, &act) in hidden.iter().enumerate() {
                grads[row + h] += g * act;
            }
            grads[self.bp() + a] += g;
        }
        for (h, &act) in hidden.iter().enumerate() {
            grads[self.wv() + h] += dvalue * act;
        }
        grads[self.bv()] += dvalue;

        for (h, &act) in hidden.iter().enumerate() {
            if act <= 0.0 {
                continue;
            }
            let mut g_hidden = dvalue * p[self.wv() + h];
            for (a, &g) in dlogits.iter().enumerate() {
                g_hidden += g * p[self.wp() + a * self.hidden + h];
            }
            let row = self.w1() + h * self.in_dim;
            for (i, &xi) in x.iter().enumerate() {
                grads[row + i] += g_hidden * xi;
            }
            grads[self.b1() + h] += g_hidden;
        }
    }
}

fn gauss(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.random::<f64>().max(1e-12);
    let u2: f64 = rng.random();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn log_softmax(logits: &[f64]) -> Vec<f64> {
    let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let log_z = logits.iter().map(|l| (l - max).exp()).sum::<f64>().ln() + max;
    logits.iter().map(|l| l - log_z).collect()
}

fn sample_categorical(log_probs: &[f64], rng: &mut impl Rng) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, lp) in log_probs.iter().enumerate() {
        acc += lp.exp();
        if u < acc {
            return i;
        }
    }
    log_probs.len() - 1
}

struct Sample {
    state: Vec<f64>,
    action: usize,
    log_prob: f64,
    reward: f64,
    done: bool,
    value: f64,
}

pub fn train_policy_agent(
    env: &EnvConfig,
    learners: &[LearnerProfile],
    cfg: &TrainConfig,
) -> Result<RecommenderPolicy, TrainError> {
    if learners.is_empty() {
        return Err(TrainError::NoLearners);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let course_ids = action_space(env);
    let in_dim = env.skill_universe.len();
    let mut net = ActorCritic::init(in_dim, cfg.hidden, course_ids.len(), &mut rng);
    let n_params = net.params.len();
    let mut opt = Adam::new(cfg.learning_rate, n_params);
    let mut grads = vec![0.0; n_params];

    let reset_state = |rng: &mut ChaCha8Rng| -> EnvState {
        reset(env, learners.choose(rng).expect("non-empty").skills.clone())
    };
    let mut state = reset_state(&mut rng);
    let mut steps_done = 0;

    while steps_done < cfg.total_steps {
        let horizon = cfg.rollout_len.min(cfg.total_steps - steps_done);
        let mut rollout: Vec<Sample> = Vec::with_capacity(horizon);
        for _ in 0..horizon {
            let x = encode_state(&state.profile, &env.skill_universe)?;
            let (_, logits, value) = net.forward(&x);
            let log_probs = log_softmax(&logits);
            let action = sample_categorical(&log_probs, &mut rng);
            let outcome = step(&state, &course_ids[action], env)?;
            rollout.push(Sample {
                state: x,
                action,
                log_prob: log_probs[action],
                reward: outcome.reward,
                done: outcome.done,
                value,
            });
            state = if outcome.done { reset_state(&mut rng) } else { outcome.next_state };
        }
        steps_done += horizon;

        // GAE over the rollout; bootstrap the tail only when the last
        // sample did not terminate its episode.
        let tail_value = if rollout.last().is_some_and(|s| !s.done) {
            let x = encode_state(&state.profile, &env.skill_universe)?;
            net.forward(&x).2
        } else {
            0.0
        };
        let n = rollout.len();
        let mut advantages = vec![0.0; n];
        let mut acc = 0.0;
        for t in (0..n).rev() {
            let next_value = if rollout[t].done {
                0.0
            } else if t + 1 < n {
                rollout[t + 1].value
            } else {
                tail_value
            };
            let non_terminal = if rollout[t].done { 0.0 } else { 1.0 };
            let delta = rollout[t].reward + cfg.discount * next_value - rollout[t].value;
            acc = delta + cfg.discount * cfg.gae_lambda * non_terminal * acc;
            advantages[t] = acc;
        }
        let returns: Vec<f64> = advantages.iter().zip(&rollout).map(|(a, s)| a + s.value).collect();
        let mean = advantages.iter().sum::<f64>() / n as f64;
        let var = advantages.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n as f64;
        let std = var.sqrt().max(1e-8);
        let norm_adv: Vec<f64> = advantages.iter().map(|a| (a - mean) / std).collect();

        let mut order: Vec<usize> = (0..n).collect();
        for epoch in 0..cfg.epochs {
            shuffle(&mut order, &mut rng);
            for chunk in order.chunks(cfg.minibatch) {
                grads.fill(0.0);
                let mut loss = 0.0;
                let scale = 1.0 / chunk.len() as f64;
                for &i in chunk {
                    let s = &rollout[i];
                    let (hidden, logits, value) = net.forward(&s.state);
                    let log_probs = log_softmax(&logits);
                    let probs: Vec<f64> = log_probs.iter().map(|lp| lp.exp()).collect();
                    let adv = norm_adv[i];

                    let ratio = (log_probs[s.action] - s.log_prob).exp();
                    let unclipped = ratio * adv;
                    let clipped = ratio.clamp(1.0 - cfg.clip, 1.0 + cfg.clip) * adv;
                    loss += -unclipped.min(clipped) * scale;
                    // The surrogate only propagates when the unclipped term
                    // is the active minimum.
                    let dlogp = if unclipped <= clipped { -ratio * adv } else { 0.0 };

                    let entropy: f64 = -probs
                        .iter()
                        .zip(&log_probs)
                        .map(|(p, lp)| if *p > 0.0 { p * lp } else { 0.0 })
                        .sum::<f64>();
                    loss += -cfg.entropy_coef * entropy * scale;

                    let verr = value - returns[i];
                    loss += cfg.value_coef * verr * verr * scale;
                    let dvalue = cfg.value_coef * 2.0 * verr * scale;

                    let mut dlogits = vec![0.0; net.actions];
                    for a in 0..net.actions {
                        let indicator = if a == s.action { 1.0 } else { 0.0 };
                        dlogits[a] = dlogp * (indicator - probs[a]) * scale
                            + cfg.entropy_coef * probs[a] * (log_probs[a] + entropy) * scale;
                    }
                    net.backward(&s.state, &hidden, &dlogits, dvalue, &mut grads);
                }
                if !loss.is_finite() {
                    return Err(TrainError::Diverged { step: steps_done - n + epoch, loss });
                }
                opt.step(&mut net.params, &grads);
            }
        }
    }

    Ok(RecommenderPolicy::PolicyGrad(PolicyGradPolicy {
        skill_universe: env.skill_universe.clone(),
        course_ids,
        net,
    }))
}

fn shuffle(order: &mut [usize], rng: &mut impl Rng) {
    for i in (1..order.len()).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
}

/// Finite-difference check of the actor-critic backward pass, kept public
/// for the acceptance suite.
pub fn actor_critic_gradient_error(seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (in_dim, hidden, actions) = (5, 6, 4);
    let net = ActorCritic::init(in_dim, hidden, actions, &mut rng);
    let x: Vec<f64> = (0..in_dim).map(|_| rng.random_range(-1.0..1.0)).collect();
    let target_logits: Vec<f64> = (0..actions).map(|_| rng.random_range(-1.0..1.0)).collect();
    let target_value: f64 = rng.random_range(-1.0..1.0);

    let loss_of = |params: &[f64]| -> f64 {
        let probe = ActorCritic { in_dim, hidden, actions, params: params.to_vec() };
        let (_, logits, value) = probe.forward(&x);
        let l: f64 = logits.iter().zip(&target_logits).map(|(a, b)| (a - b) * (a - b)).sum();
        l + (value - target_value) * (value - target_value)
    };

    let (h, logits, value) = net.forward(&x);
    let dlogits: Vec<f64> =
        logits.iter().zip(&target_logits).map(|(a, b)| 2.0 * (a - b)).collect();
    let dvalue = 2.0 * (value - target_value);
    let mut grads = vec![0.0; net.params.len()];
    net.backward(&x, &h, &dlogits, dvalue, &mut grads);

    gradient_check(&net.params, &grads, 1e-5, loss_of)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recommend::policy_recommend;
    use crate::skill::{CourseRecord, JobRecord, SkillMap, Thresholds};

    fn sm(pairs: &[(&str, u8)]) -> SkillMap {
        SkillMap::from_pairs(pairs.iter().map(|&(s, l)| (s, l))).unwrap()
    }

    fn tiny_env() -> (EnvConfig, Vec<LearnerProfile>) {
        let courses = vec![
            CourseRecord { id: "c1".into(), required: SkillMap::new(), provided: sm(&[("x", 3)]) },
            CourseRecord { id: "c2".into(), required: SkillMap::new(), provided: sm(&[("y", 3)]) },
            CourseRecord { id: "c3".into(), required: SkillMap::new(), provided: sm(&[("z", 1)]) },
        ];
        let jobs = vec![
            JobRecord { id: "j1".into(), required: sm(&[("x", 3)]) },
            JobRecord { id: "j2".into(), required: sm(&[("x", 3), ("y", 3)]) },
        ];
        let env = EnvConfig::new(
            courses,
            jobs,
            Thresholds::default(),
            2,
            vec!["x".into(), "y".into(), "z".into()],
        );
        let learners = vec![LearnerProfile { id: "u1".into(), skills: SkillMap::new() }];
        (env, learners)
    }

    #[test]
    fn actor_critic_gradients_match_finite_differences() {
        for seed in 0..5 {
            let err = actor_critic_gradient_error(seed);
            assert!(err < 1e-5, "seed {seed}: err={err}");
        }
    }

    #[test]
    fn same_seed_gives_identical_parameters() {
        let (env, learners) = tiny_env();
        let cfg = TrainConfig { total_steps: 600, seed: 4, ..TrainConfig::default() };
        let a = train_policy_agent(&env, &learners, &cfg).unwrap();
        let b = train_policy_agent(&env, &learners, &cfg).unwrap();
        match (a, b) {
            (RecommenderPolicy::PolicyGrad(pa), RecommenderPolicy::PolicyGrad(pb)) => {
                assert_eq!(pa.net.params, pb.net.params);
            }
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn learns_the_two_course_combo() {
        let (env, learners) = tiny_env();
        let cfg = TrainConfig { total_steps: 12_000, seed: 2, ..TrainConfig::default() };
        let policy = train_policy_agent(&env, &learners, &cfg).unwrap();
        let rec = policy_recommend(&policy, &SkillMap::new(), &env, 2).unwrap();
        assert_eq!(rec.achieved_reward, 2, "courses taken: {:?}", rec.courses);
    }
}
