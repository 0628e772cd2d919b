//! Rewriting a single word into `S_alpha U^nu S_beta*`.
//!
//! Tokens: `U(v)` for `U^v`, `S(mu)` for `S_mu = U^mu S` and `S*(mu)` for `S_mu* = S* U^{-mu}`.
//! Writing `w = w0 + F q` with `w0` in `I(F)` (floored), the rules are
//!
//! * merge `U(v) U(w) -> U(v + w)` and drop `U(0)`,
//! * R2: `S*(mu) U(v) S(l) -> delta_{w0,0} U(qG)` with `w = v - mu + l` (also without the `U`),
//! * R1: `U(v) S(mu) -> S(w0) U(qG)` with `w = v + mu`,
//! * R3: `S*(mu) U(v) -> U(-qG) S*(w0)` with `w = mu - v`, the adjoint of R1.
//!
//! The leftmost redex is rewritten first, trying the rules in the order listed.
//!
//! Termination: each step strictly decreases, lexicographically,
//! (number of `S`/`S*` tokens, sum over `U` tokens of the `S` tokens to its right plus the
//! `S*` tokens to its left, number of tokens). R2 removes two `S` tokens; R1 and R3 move a
//! `U` past one `S`-type token in the direction that lowers the second entry (a new `U(0)`
//! only lowers it further); merging and dropping keep the first two entries and shorten
//! the word. A word with no redex has the form `S(..)* U(..)? S*(..)*`.

use super::element::NormalTerm;
use super::word::{GeneratorWord, Letter};
use super::Ctx;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    U(Vec<i64>),
    S(usize),
    SStar(usize),
}

pub(crate) fn tokens(ctx: &Ctx, w: &GeneratorWord) -> Vec<Token> {
    w.letters()
        .iter()
        .map(|l| match *l {
            Letter::U { j, e } => {
                let mut v = vec![0; ctx.d()];
                v[j - 1] = e;
                Token::U(v)
            }
            Letter::S => Token::S(0),
            Letter::SStar => Token::SStar(0),
        })
        .collect()
}

enum Step {
    Rewrote,
    Zero,
    Done,
}

fn step(ctx: &Ctx, w: &mut Vec<Token>) -> Step {
    for i in 0..w.len() {
        match (&w[i], w.get(i + 1), w.get(i + 2)) {
            (Token::U(v), _, _) if v.iter().all(|&x| x == 0) => {
                w.remove(i);
                return Step::Rewrote;
            }
            (Token::U(v), Some(Token::U(u)), _) => {
                let sum = v.iter().zip(u).map(|(a, b)| a + b).collect();
                w.splice(i..i + 2, [Token::U(sum)]);
                return Step::Rewrote;
            }
            (Token::SStar(mu), Some(Token::S(l)), _) => {
                let (mu, l) = (*mu, *l);
                return r2(ctx, w, i, 2, mu, &vec![0; ctx.d()], l);
            }
            (Token::SStar(mu), Some(Token::U(v)), Some(Token::S(l))) => {
                let (mu, v, l) = (*mu, v.clone(), *l);
                return r2(ctx, w, i, 3, mu, &v, l);
            }
            (Token::U(v), Some(Token::S(mu)), _) => {
                let (lambda, qg) = ctx.push(v, *mu);
                w.splice(i..i + 2, [Token::S(lambda), Token::U(qg)]);
                return Step::Rewrote;
            }
            (Token::SStar(mu), Some(Token::U(v)), _) => {
                let neg: Vec<i64> = v.iter().map(|x| -x).collect();
                let (lambda, qg) = ctx.push(&neg, *mu);
                let back = qg.iter().map(|x| -x).collect();
                w.splice(i..i + 2, [Token::U(back), Token::SStar(lambda)]);
                return Step::Rewrote;
            }
            _ => {}
        }
    }
    Step::Done
}

fn r2(
    ctx: &Ctx,
    w: &mut Vec<Token>,
    i: usize,
    width: usize,
    mu: usize,
    v: &[i64],
    l: usize,
) -> Step {
    let (m, lv) = (ctx.decode(mu), ctx.decode(l));
    let sum: Vec<i64> = v
        .iter()
        .zip(&m)
        .zip(&lv)
        .map(|((x, y), z)| x - y + z)
        .collect();
    let (w0, q) = ctx.split(&sum);
    if w0 != 0 {
        return Step::Zero;
    }
    w.splice(i..i + width, [Token::U(ctx.row_times_g(&q))]);
    Step::Rewrote
}

/// Normal form of a word, or `None` when it vanishes.
pub(crate) fn rewrite(ctx: &Ctx, mut w: Vec<Token>) -> Option<NormalTerm> {
    loop {
        match step(ctx, &mut w) {
            Step::Rewrote => {}
            Step::Zero => return None,
            Step::Done => break,
        }
    }
    let mut alpha = Vec::new();
    let mut nu = vec![0; ctx.d()];
    let mut beta = Vec::new();
    for t in w {
        match t {
            Token::S(mu) => {
                debug_assert!(beta.is_empty() && nu.iter().all(|&x| x == 0));
                alpha.push(mu)
            }
            Token::U(v) => nu = v,
            Token::SStar(mu) => beta.push(mu),
        }
    }
    beta.reverse();
    Some(NormalTerm { alpha, nu, beta })
}

pub(crate) fn rewrite_word(ctx: &Ctx, w: &GeneratorWord) -> Option<NormalTerm> {
    rewrite(ctx, tokens(ctx, w))
}
