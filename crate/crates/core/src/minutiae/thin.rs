use super::BinaryImage;

/// Neighbour offsets in Zhang–Suen order P2..P9 (N, NE, E, SE, S, SW, W, NW).
const RING: [(isize, isize); 8] = [(0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1)];

fn ring(img: &BinaryImage, x: usize, y: usize) -> [bool; 8] {
    let mut p = [false; 8];
    for (slot, (dx, dy)) in p.iter_mut().zip(RING) {
        *slot = img.get_signed(x as isize + dx, y as isize + dy);
    }
    p
}

fn deletable(p: &[bool; 8], first_pass: bool) -> bool {
    let b = p.iter().filter(|&&v| v).count();
    if !(2..=6).contains(&b) {
        return false;
    }
    let a = (0..8).filter(|&i| !p[i] && p[(i + 1) % 8]).count();
    if a != 1 {
        return false;
    }
    // p[0]=P2 N, p[2]=P4 E, p[4]=P6 S, p[6]=P8 W
    let (n, e, s, w) = (p[0], p[2], p[4], p[6]);
    if first_pass {
        !(n && e && s) && !(e && s && w)
    } else {
        !(n && e && w) && !(n && s && w)
    }
}

/// Number of 8-connected groups of set pixels in the ring around a pixel.
/// Removing the pixel preserves local topology iff this is exactly one.
fn ring_components(p: &[bool; 8]) -> usize {
    // consecutive ring pixels touch; 4-neighbours (even indices) also touch
    // the 4-neighbours two steps away
    let mut seen = [false; 8];
    let mut groups = 0;
    for start in 0..8 {
        if !p[start] || seen[start] {
            continue;
        }
        groups += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            let mut adj = vec![(i + 1) % 8, (i + 7) % 8];
            if i % 2 == 0 {
                adj.push((i + 2) % 8);
                adj.push((i + 6) % 8);
            }
            for j in adj {
                if p[j] && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
    }
    groups
}

fn zhang_suen_pass(cur: &mut BinaryImage, first_pass: bool) -> bool {
    let (w, h) = (cur.width(), cur.height());
    let marked: Vec<(usize, usize)> = (0..h)
        .flat_map(|y| (0..w).map(move |x| (x, y)))
        .filter(|&(x, y)| cur.get(x, y) && deletable(&ring(cur, x, y), first_pass))
        .collect();
    let mut changed = false;
    for (x, y) in marked {
        if ring_components(&ring(cur, x, y)) == 1 {
            cur.set(x, y, false);
            changed = true;
        }
    }
    changed
}

/// Removes one simple pixel from every fully set 2×2 block.
fn break_blocks(cur: &mut BinaryImage) -> bool {
    let (w, h) = (cur.width(), cur.height());
    let mut changed = false;
    for y in 0..h.saturating_sub(1) {
        for x in 0..w.saturating_sub(1) {
            let block = [(x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)];
            if !block.iter().all(|&(bx, by)| cur.get(bx, by)) {
                continue;
            }
            if let Some(&(bx, by)) = block.iter().find(|&&(bx, by)| ring_components(&ring(cur, bx, by)) == 1) {
                cur.set(bx, by, false);
                changed = true;
            }
        }
    }
    changed
}

/// Zhang–Suen thinning iterated to a fixpoint.
///
/// Candidates are marked in parallel as usual, then each removal is confirmed
/// against the partially thinned image with a simple-point test so that
/// small or two-pixel-thick components cannot vanish or split. Junction
/// blocks that Zhang–Suen leaves two pixels wide are broken afterwards.
pub fn thin(img: &BinaryImage) -> BinaryImage {
    let mut cur = img.clone();
    loop {
        let mut changed = false;
        for first_pass in [true, false] {
            changed |= zhang_suen_pass(&mut cur, first_pass);
        }
        if !changed {
            changed = break_blocks(&mut cur);
        }
        if !changed {
            return cur;
        }
    }
}

#[cfg(test)]
pub(crate) fn components(img: &BinaryImage) -> usize {
    let (w, h) = (img.width(), img.height());
    let mut seen = vec![false; w * h];
    let mut count = 0;
    for start in 0..w * h {
        if !img.bits()[start] || seen[start] {
            continue;
        }
        count += 1;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            let (x, y) = ((i % w) as isize, (i / w) as isize);
            for (dx, dy) in RING {
                let (nx, ny) = (x + dx, y + dy);
                if img.get_signed(nx, ny) {
                    let j = ny as usize * w + nx as usize;
                    if !seen[j] {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
    }
    count
}
