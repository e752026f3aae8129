use std::collections::HashMap;

use super::mdp::MdpModel;

pub const BLACKJACK_STATES: usize = 290;

const STICK: usize = 0;
const HIT: usize = 1;
const BUST: u32 = 22;

/// Probability of drawing a card of value `v` (ace = 1) from an infinite deck.
fn card_prob(v: u32) -> f64 {
    if v == 10 {
        4.0 / 13.0
    } else {
        1.0 / 13.0
    }
}

/// State index: no-usable-ace block (totals 4..=22, 22 = bust) first, then
/// the usable-ace block (totals 12..=21); dealer card 1..=10 varies fastest.
pub fn state_index(total: u32, usable: bool, dealer: u32) -> usize {
    let d = (dealer - 1) as usize;
    if usable {
        190 + (total - 12) as usize * 10 + d
    } else {
        (total - 4) as usize * 10 + d
    }
}

/// Player hand after drawing `card`: `(total, usable ace)`, with any total
/// above 21 collapsed to the bust state.
fn add_card(total: u32, usable: bool, card: u32) -> (u32, bool) {
    let (mut t, mut u) = (total + card, usable);
    if card == 1 && !u && total + 11 <= 21 {
        t = total + 11;
        u = true;
    }
    if t > 21 && u {
        t -= 10;
        u = false;
    }
    if t > 21 {
        (BUST, false)
    } else {
        (t, u)
    }
}

/// Distribution of the dealer's final total (17..=21, or 22 for bust)
/// starting from a hand `(total, usable ace)`; the dealer hits below 17.
fn dealer_final(total: u32, usable: bool, memo: &mut HashMap<(u32, bool), [f64; 6]>) -> [f64; 6] {
    if total > 21 {
        let mut out = [0.0; 6];
        out[5] = 1.0;
        return out;
    }
    if total >= 17 {
        let mut out = [0.0; 6];
        out[(total - 17) as usize] = 1.0;
        return out;
    }
    if let Some(r) = memo.get(&(total, usable)) {
        return *r;
    }
    let mut out = [0.0; 6];
    for card in 1..=10 {
        let (mut t, mut u) = (total + card, usable);
        if card == 1 && !u && total + 11 <= 21 {
            t = total + 11;
            u = true;
        }
        if t > 21 && u {
            t -= 10;
            u = false;
        }
        let sub = dealer_final(t, u, memo);
        for i in 0..6 {
            out[i] += card_prob(card) * sub[i];
        }
    }
    memo.insert((total, usable), out);
    out
}

/// Expected reward of sticking on `total` against the dealer's up card.
fn stick_reward(total: u32, dealer: u32, memo: &mut HashMap<(u32, bool), [f64; 6]>) -> f64 {
    let (t0, u0) = if dealer == 1 { (11, true) } else { (dealer, false) };
    let dist = dealer_final(t0, u0, memo);
    let mut r = dist[5];
    for (i, &q) in dist[..5].iter().enumerate() {
        let d = 17 + i as u32;
        if total > d {
            r += q;
        } else if total < d {
            r -= q;
        }
    }
    r
}

/// Infinite-deck blackjack as a 290-state, two-action MDP (0 = stick,
/// 1 = hit) with mean cost `-E[reward]`, no discounting, uniform source
/// weights and uniform pair sampling.
pub fn make_blackjack() -> MdpModel {
    let (ns, na) = (BLACKJACK_STATES, 2);
    let mut p = vec![Vec::new(); ns * na];
    let mut terminal = vec![0.0; ns * na];
    let mut cost_mean = vec![0.0; ns * na];
    let mut memo = HashMap::new();

    let mut hands: Vec<(u32, bool)> = (4..=22).map(|t| (t, false)).collect();
    hands.extend((12..=21).map(|t| (t, true)));
    for &(total, usable) in &hands {
        for dealer in 1..=10 {
            let s = state_index(total, usable, dealer);
            let (ks, kh) = (s * na + STICK, s * na + HIT);
            if total == BUST {
                for k in [ks, kh] {
                    terminal[k] = 1.0;
                    cost_mean[k] = 1.0;
                }
                continue;
            }
            terminal[ks] = 1.0;
            cost_mean[ks] = -stick_reward(total, dealer, &mut memo);
            let mut row: Vec<(usize, f64)> = Vec::new();
            for card in 1..=10 {
                let (t, u) = add_card(total, usable, card);
                let next = state_index(t, u, dealer);
                match row.iter_mut().find(|(i, _)| *i == next) {
                    Some(e) => e.1 += card_prob(card),
                    None => row.push((next, card_prob(card))),
                }
            }
            p[kh] = row;
        }
    }

    MdpModel {
        n_states: ns,
        n_actions: na,
        p,
        terminal,
        cost_mean,
        cost_sd: 1.0,
        beta: 1.0,
        xi: vec![1.0 / ns as f64; ns],
        pi: vec![1.0 / (ns * na) as f64; ns * na],
        batch: 200,
    }
}
