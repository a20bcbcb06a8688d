//! Value-based agent: action-value network trained with experience replay,
//! a periodically synchronized target network, annealed epsilon-greedy
//! exploration and a squared temporal-difference loss.

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::env::{encode_state, reset, step, EnvConfig};
use crate::nn::{Adam, Mlp, MlpShape};
use crate::skill::LearnerProfile;

use super::{action_space, argmax, RecommenderPolicy, TrainConfig, TrainError, ValuePolicy};

struct Transition {
    state: Vec<f64>,
    action: usize,
    reward: f64,
    next_state: Vec<f64>,
    done: bool,
}

/// Fixed-capacity ring buffer of transitions.
struct Replay {
    buf: Vec<Transition>,
    capacity: usize,
    next: usize,
}

impl Replay {
    fn new(capacity: usize) -> Self {
        Replay { buf: Vec::with_capacity(capacity), capacity, next: 0 }
    }

    fn push(&mut self, t: Transition) {
        if self.buf.len() < self.capacity {
            self.buf.push(t);
        } else {
            self.buf[self.next] = t;
        }
        self.next = (self.next + 1) % self.capacity;
    }

    fn len(&self) -> usize {
        self.buf.len()
    }

    fn sample<'a>(&'a self, batch: usize, rng: &mut impl Rng) -> Vec<&'a Transition> {
        (0..batch).map(|_| &self.buf[rng.random_range(0..self.buf.len())]).collect()
    }
}

pub fn train_value_agent(
    env: &EnvConfig,
    learners: &[LearnerProfile],
    cfg: &TrainConfig,
) -> Result<RecommenderPolicy, TrainError> {
    if learners.is_empty() {
        return Err(TrainError::NoLearners);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let course_ids = action_space(env);
    let shape = MlpShape {
        in_dim: env.skill_universe.len(),
        hidden: cfg.hidden,
        out_dim: course_ids.len(),
    };
    let mut q_net = Mlp::init(shape, &mut rng);
    let mut target_net = q_net.clone();
    let mut opt = Adam::new(cfg.learning_rate, shape.n_params());
    let mut replay = Replay::new(cfg.replay_capacity);
    let mut grads = vec![0.0; shape.n_params()];

    let decay_steps = ((cfg.total_steps as f64) * cfg.eps_decay_frac).max(1.0);

    let mut state = reset(env, learners.choose(&mut rng).expect("non-empty").skills.clone());
    let mut encoded = encode_state(&state.profile, &env.skill_universe)?;

    for global_step in 0..cfg.total_steps {
        let eps = cfg.eps_start
            + (cfg.eps_end - cfg.eps_start) * (global_step as f64 / decay_steps).min(1.0);
        let action = if rng.random::<f64>() < eps {
            rng.random_range(0..course_ids.len())
        } else {
            argmax(&q_net.forward(&encoded))
        };

        let outcome = step(&state, &course_ids[action], env)?;
        let next_encoded = encode_state(&outcome.next_state.profile, &env.skill_universe)?;
        replay.push(Transition {
            state: encoded,
            action,
            reward: outcome.reward,
            next_state: next_encoded.clone(),
            done: outcome.done,
        });

        if outcome.done {
            state = reset(env, learners.choose(&mut rng).expect("non-empty").skills.clone());
            encoded = encode_state(&state.profile, &env.skill_universe)?;
        } else {
            state = outcome.next_state;
            encoded = next_encoded;
        }

        if replay.len() >= cfg.warmup.max(cfg.batch_size) && global_step % cfg.train_freq == 0 {
            let batch = replay.sample(cfg.batch_size, &mut rng);
            grads.fill(0.0);
            let mut loss = 0.0;
            let scale = 1.0 / batch.len() as f64;
            for t in &batch {
                let target = if t.done {
                    t.reward
                } else {
                    let next_q = target_net.forward(&t.next_state);
                    t.reward + cfg.discount * next_q[argmax(&next_q)]
                };
                let (hidden, out) = q_net.forward_cached(&t.state);
                let td = out[t.action] - target;
                loss += td * td * scale;
                let mut grad_out = vec![0.0; shape.out_dim];
                grad_out[t.action] = 2.0 * td * scale;
                q_net.backward(&t.state, &hidden, &grad_out, &mut grads);
            }
            if !loss.is_finite() {
                return Err(TrainError::Diverged { step: global_step, loss });
            }
            opt.step(&mut q_net.params, &grads);
        }

        if (global_step + 1) % cfg.target_sync == 0 {
            target_net = q_net.clone();
        }
    }

    Ok(RecommenderPolicy::Value(ValuePolicy {
        skill_universe: env.skill_universe.clone(),
        course_ids,
        net: q_net,
    }))
}
