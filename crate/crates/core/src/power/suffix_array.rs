//! Suffix array by prefix doubling with radix sort, plus the Kasai LCP array.

use crate::words::Letter;

/// Sorted suffix start positions of `text`.
pub(crate) fn suffix_array(text: &[Letter]) -> Vec<u32> {
    let n = text.len();
    if n == 0 {
        return Vec::new();
    }
    let mut rank: Vec<u32> = text.iter().map(|&c| c as u32 + 1).collect();
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let mut tmp = vec![0u32; n];
    let mut buf = vec![0u32; n];
    let mut alpha = 257usize;

    // initial order by first letter
    counting_sort(&mut sa, &mut buf, alpha, |i| rank[i as usize] as usize);

    let mut h = 1usize;
    loop {
        // sort by (rank[i], rank[i + h]) using two stable passes
        let key2 = |i: u32| {
            let j = i as usize + h;
            if j < n {
                rank[j] as usize
            } else {
                0
            }
        };
        // second key: suffixes whose i+h runs past the end come first
        let mut pos = 0;
        for i in (n - h.min(n))..n {
            buf[pos] = i as u32;
            pos += 1;
        }
        for &s in sa.iter() {
            if s as usize >= h {
                buf[pos] = s - h as u32;
                pos += 1;
            }
        }
        debug_assert_eq!(pos, n);
        std::mem::swap(&mut sa, &mut buf);
        counting_sort(&mut sa, &mut buf, alpha, |i| rank[i as usize] as usize);

        tmp[sa[0] as usize] = 1;
        let mut classes = 1u32;
        for w in 1..n {
            let (a, b) = (sa[w - 1], sa[w]);
            if rank[a as usize] != rank[b as usize] || key2(a) != key2(b) {
                classes += 1;
            }
            tmp[b as usize] = classes;
        }
        std::mem::swap(&mut rank, &mut tmp);
        if classes as usize == n {
            break;
        }
        alpha = classes as usize + 1;
        h *= 2;
    }
    sa
}

fn counting_sort(sa: &mut Vec<u32>, buf: &mut Vec<u32>, alpha: usize, key: impl Fn(u32) -> usize) {
    let mut count = vec![0usize; alpha + 1];
    for &s in sa.iter() {
        count[key(s) + 1] += 1;
    }
    for i in 1..count.len() {
        count[i] += count[i - 1];
    }
    for &s in sa.iter() {
        let k = key(s);
        buf[count[k]] = s;
        count[k] += 1;
    }
    std::mem::swap(sa, buf);
}

/// `lcp[i]` is the longest common prefix of suffixes `sa[i-1]` and `sa[i]`;
/// `lcp[0] = 0`.
pub(crate) fn lcp_array(text: &[Letter], sa: &[u32]) -> Vec<u32> {
    let n = text.len();
    let mut rank = vec![0u32; n];
    for (i, &s) in sa.iter().enumerate() {
        rank[s as usize] = i as u32;
    }
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && text[i + h] == text[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

/// Z-function: `z[i]` is the longest common prefix of `s` and `s[i..]`,
/// with `z[0] = |s|`.
pub(crate) fn z_function(s: &[Letter]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0usize; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0usize, 0usize);
    for i in 1..n {
        if i < r {
            z[i] = (r - i).min(z[i - l]);
        }
        while i + z[i] < n && s[z[i]] == s[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}
