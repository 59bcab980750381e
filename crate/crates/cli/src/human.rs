//! Terminal robber: prompts on one stream, reads moves from another.

use std::io::{BufRead, Write};

use tempcops::strategy::RobberSource;
use tempcops::Arena;

pub struct HumanRobber<R, W> {
    input: R,
    prompt: W,
    start: Option<usize>,
}

impl<R: BufRead, W: Write> HumanRobber<R, W> {
    pub fn new(input: R, prompt: W, start: Option<usize>) -> Self {
        HumanRobber {
            input,
            prompt,
            start,
        }
    }

    /// Next integer typed by the user; `usize::MAX` for unparsable input,
    /// `None` at end of input.
    fn read(&mut self) -> Option<usize> {
        let mut buf = String::new();
        match self.input.read_line(&mut buf) {
            Ok(0) | Err(_) => None,
            Ok(_) => Some(buf.trim().parse().unwrap_or(usize::MAX)),
        }
    }
}

impl<R: BufRead, W: Write> RobberSource for HumanRobber<R, W> {
    fn start(&mut self, d: &Arena, cop: usize) -> Option<usize> {
        if self.start.is_some() {
            return self.start;
        }
        loop {
            let _ = write!(
                self.prompt,
                "cop starts on {cop}; choose your vertex (0..{}): ",
                d.n() - 1
            );
            let _ = self.prompt.flush();
            let v = self.read()?;
            if v < d.n() {
                return Some(v);
            }
            let _ = writeln!(self.prompt, "no such vertex");
        }
    }

    fn reply(&mut self, d: &Arena, t: usize, cop: usize, robber: usize) -> Option<usize> {
        let moves: Vec<String> = d
            .out_list(t % d.p(), robber)
            .iter()
            .map(usize::to_string)
            .collect();
        let _ = write!(
            self.prompt,
            "round {t}: cop on {cop}, you on {robber}; moves {}: ",
            moves.join(" ")
        );
        let _ = self.prompt.flush();
        self.read()
    }

    fn rejected(&mut self, _t: usize, _robber: usize, _attempt: usize) {
        let _ = writeln!(self.prompt, "illegal move, try again");
    }
}
