use morselab_core::cayley::{build_ball, BallOptions, CayleyBall, SmallCancellationGroup};
use morselab_core::corpus;
use morselab_core::words::{Letter, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Trivial words of length `n` never leave the ball of radius `n / 2`.
fn ball_says_trivial(ball: &CayleyBall, w: &Word) -> bool {
    let limit = w.len() / 2;
    let mut v = 0;
    for &l in w.letters() {
        match ball.neighbor(v, l) {
            Some(t) if ball.dist0(t) <= limit => v = t,
            _ => return false,
        }
    }
    v == 0
}

fn reduced_words(letters: u16, len: usize, out: &mut Vec<Word>, cur: &mut Vec<Letter>) {
    if cur.len() == len {
        out.push(Word(cur.clone()));
        return;
    }
    for l in 0..letters {
        let l = Letter(l);
        if cur.last() == Some(&l.inverse()) {
            continue;
        }
        cur.push(l);
        reduced_words(letters, len, out, cur);
        cur.pop();
    }
}

#[test]
fn dehn_agrees_with_ball_on_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for e in corpus::small_cancellation() {
        let g = SmallCancellationGroup::new(e.presentation()).unwrap();
        let ball = build_ball(&g, 4, &BallOptions::default()).unwrap();
        let k = g.presentation().alphabet().size() as u16;
        let mut words = Vec::new();
        if k <= 4 {
            for len in 0..=8 {
                reduced_words(k, len, &mut words, &mut Vec::new());
            }
        } else {
            for _ in 0..5_000 {
                let len = rng.gen_range(0..=8);
                let mut w: Vec<Letter> = Vec::new();
                while w.len() < len {
                    let l = Letter(rng.gen_range(0..k));
                    if w.last() != Some(&l.inverse()) {
                        w.push(l);
                    }
                }
                words.push(Word(w));
            }
        }
        // trivial words are rare among random ones; add products of relator pieces
        for m in g.closure().members() {
            if m.word.len() <= 8 {
                words.push(m.word.clone());
            }
        }
        let mut trivial = 0;
        for w in &words {
            let a = g.is_trivial(w);
            assert_eq!(a, ball_says_trivial(&ball, w), "{}: {}", e.name, g.presentation().format_word(w));
            trivial += a as usize;
        }
        assert!(trivial >= 1, "{}", e.name);
    }
}
