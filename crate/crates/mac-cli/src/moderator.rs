//! Interactive moderation: lets a person override the canonical steering
//! message before each agent turn, exactly as a group-chat manager would.

use std::io::{self, BufRead, Write};

use mac_core::agents::Transcript;
use mac_core::debate::Moderator;

/// Prompts on stderr and reads one line from stdin per steering point.
/// An empty line or EOF keeps the canonical auto-reply.
#[derive(Debug, Default)]
pub struct StdinModerator;

impl Moderator for StdinModerator {
    fn steer(&mut self, canonical: &str, _transcript: &Transcript) -> Option<String> {
        eprintln!("auto-reply: {canonical}");
        eprint!("Provide feedback to chat_manager. Press enter to skip and use auto-reply: ");
        let _ = io::stderr().flush();
        let mut line = String::new();
        match io::stdin().lock().read_line(&mut line) {
            Ok(0) | Err(_) => None,
            Ok(_) => {
                let trimmed = line.trim();
                if trimmed.is_empty() {
                    None
                } else {
                    Some(trimmed.to_string())
                }
            }
        }
    }
}
