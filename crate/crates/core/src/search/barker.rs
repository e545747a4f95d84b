//! Barker codes: ±1 sequences whose aperiodic autocorrelations all have
//! magnitude at most 1.

/// Lengths beyond this are searched but flagged; none are expected there.
pub const BARKER_GUARD: usize = 13;

fn is_barker(c: &[i8]) -> bool {
    let n = c.len();
    (1..n).all(|m| {
        let s: i32 = (0..n - m).map(|k| (c[k] * c[k + m]) as i32).sum();
        s.abs() <= 1
    })
}

/// All Barker sequences of lengths `2..=len_max` starting `+1, +1`, ordered
/// by length then lexicographically with `+1 < -1`.
pub fn barker_enumerate(len_max: usize) -> Vec<Vec<i8>> {
    if len_max > BARKER_GUARD {
        log::warn!("Barker search above length {BARKER_GUARD} is exponential and expected to be empty");
    }
    let mut out = Vec::new();
    for len in 2..=len_max {
        // c_0 = c_1 = +1; bit i of mask (from the top) gives c_{i+2}
        let free = len - 2;
        for mask in 0u64..1 << free {
            let mut c = vec![1i8, 1];
            c.extend((0..free).rev().map(|b| if mask >> b & 1 == 1 { -1 } else { 1 }));
            if is_barker(&c) {
                out.push(c);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn show(c: &[i8]) -> String {
        c.iter().map(|&x| if x == 1 { '+' } else { '-' }).collect()
    }

    #[test]
    fn eight_codes_to_thirteen() {
        let all: Vec<String> = barker_enumerate(13).iter().map(|c| show(c)).collect();
        assert_eq!(
            all,
            vec!["++", "++-", "+++-", "++-+", "+++-+", "+++--+-", "+++---+--+-", "+++++--++-+-+"]
        );
    }

    #[test]
    fn short() {
        assert_eq!(barker_enumerate(2), vec![vec![1, 1]]);
        let four: Vec<String> = barker_enumerate(4).iter().filter(|c| c.len() == 4).map(|c| show(c)).collect();
        assert_eq!(four, vec!["+++-", "++-+"]);
        assert!(barker_enumerate(1).is_empty());
    }
}
