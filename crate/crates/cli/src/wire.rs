//! TCP transport for split verifier/prover runs.
//!
//! Framing: a 4-byte big-endian length prefix followed by one UTF-8 JSON
//! message per protocol step. Control frames (hello, trial, done) carry a
//! "kind" tag and never enter transcripts; protocol frames are the same
//! message payloads the in-process engine records, and the verifier side
//! drives trials through the same engine, so transcripts come out
//! byte-identical to an in-process run with the same seed.

use std::io::{Read, Write};
use std::net::{TcpListener, TcpStream};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use qkit_core::error::{Error, Party, Result};
use qkit_core::protocol::{run_protocol, Message, ProtocolId, Prover};
use qkit_core::rng::{party_rng, TrialRng};
use qkit_core::tcf::TcfFamily;

use crate::config::{make_prover, ProverKind, RunConfig};
use crate::runner::TranscriptRecord;
use crate::stats::RunSummary;

const MAX_FRAME: u32 = 1 << 22;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(10);

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum Control {
    Hello {
        protocol: ProtocolId,
        tcf: TcfFamily,
        n_bits: u32,
        trials: u64,
        seed: u64,
    },
    HelloAck {
        protocol: ProtocolId,
    },
    Trial {
        index: u64,
    },
    Done,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Frame {
    Control(Control),
    Protocol(Message),
}

fn write_frame<W: Write>(stream: &mut W, frame: &Frame) -> Result<()> {
    let body = serde_json::to_vec(frame)?;
    let len = u32::try_from(body.len())
        .map_err(|_| Error::Validation("frame too large".into()))?;
    if len > MAX_FRAME {
        return Err(Error::Validation("frame exceeds the 4 MiB cap".into()));
    }
    stream.write_all(&len.to_be_bytes())?;
    stream.write_all(&body)?;
    stream.flush()?;
    Ok(())
}

fn read_frame<R: Read>(stream: &mut R, from: Party) -> Result<Frame> {
    let mut len_buf = [0u8; 4];
    stream.read_exact(&mut len_buf)?;
    let len = u32::from_be_bytes(len_buf);
    if len > MAX_FRAME {
        return Err(Error::violation(
            from,
            format!("frame length {len} exceeds the cap"),
        ));
    }
    let mut body = vec![0u8; len as usize];
    stream.read_exact(&mut body)?;
    serde_json::from_slice(&body)
        .map_err(|e| Error::violation(from, format!("undecodable frame: {e}")))
}

/// Prover proxy: forwards verifier messages over the socket and waits for
/// the remote response. The local rng argument is deliberately unused; the
/// remote process owns the prover stream.
struct RemoteProver<'a> {
    protocol: ProtocolId,
    stream: &'a mut TcpStream,
}

impl Prover for RemoteProver<'_> {
    fn protocol_id(&self) -> ProtocolId {
        self.protocol
    }

    fn respond(
        &mut self,
        msg: &Message,
        _rng: &mut qkit_core::rng::StreamRng,
    ) -> Result<Message> {
        write_frame(self.stream, &Frame::Protocol(msg.clone()))?;
        match read_frame(self.stream, Party::Prover)? {
            Frame::Protocol(reply) => Ok(reply),
            Frame::Control(_) => Err(Error::violation(
                Party::Prover,
                "control frame where a protocol message was expected",
            )),
        }
    }
}

/// Serves one prover session: binds, prints the bound address, drives
/// `config.trials` executions and writes transcripts exactly like an
/// in-process run. Returns the summary.
pub fn serve_verifier(
    listen: &str,
    config: &RunConfig,
    mut out: Option<&mut dyn Write>,
    announce: &mut dyn Write,
) -> Result<RunSummary> {
    config.validate()?;
    let listener = TcpListener::bind(listen)?;
    writeln!(announce, "listening on {}", listener.local_addr()?)?;
    announce.flush()?;
    let (mut stream, peer) = listener.accept()?;
    log::info!("prover connected from {peer}");
    stream.set_nodelay(true).ok();
    stream.set_read_timeout(Some(DEFAULT_TIMEOUT))?;
    stream.set_write_timeout(Some(DEFAULT_TIMEOUT))?;

    write_frame(
        &mut stream,
        &Frame::Control(Control::Hello {
            protocol: config.protocol,
            tcf: config.tcf,
            n_bits: config.n_bits,
            trials: config.trials,
            seed: config.seed,
        }),
    )?;
    match read_frame(&mut stream, Party::Prover)? {
        Frame::Control(Control::HelloAck { protocol }) if protocol == config.protocol => {}
        Frame::Control(Control::HelloAck { protocol }) => {
            return Err(Error::ProtocolMismatch {
                verifier: config.protocol.to_string(),
                prover: protocol.to_string(),
            })
        }
        _ => {
            return Err(Error::violation(Party::Prover, "expected hello_ack"));
        }
    }

    let mut acc = crate::runner::run_summary_accumulator();
    for trial in 0..config.trials {
        write_frame(&mut stream, &Frame::Control(Control::Trial { index: trial }))?;
        let mut verifier = config.make_verifier();
        let mut remote = RemoteProver {
            protocol: config.protocol,
            stream: &mut stream,
        };
        let mut rng = TrialRng::new(config.seed, trial);
        let result = match run_protocol(verifier.as_mut(), &mut remote, &mut rng) {
            Ok(result) => result,
            Err(e) => {
                // Record the abort as a rejection for this trial, then
                // surface the violation.
                if let Some(w) = out.as_deref_mut() {
                    let record = crate::runner::abort_record(config, trial);
                    serde_json::to_writer(&mut *w, &record)?;
                    w.write_all(b"\n")?;
                }
                return Err(e);
            }
        };
        // Forward the final verdict so the remote prover sees the outcome.
        if let Some(last) = result.transcript.messages.last() {
            if matches!(last.payload, Message::Verdict { .. }) {
                write_frame(&mut stream, &Frame::Protocol(last.payload.clone()))?;
            }
        }
        acc.push(&result);
        if let Some(w) = out.as_deref_mut() {
            let record = TranscriptRecord::from_execution(config.seed, trial, &result);
            serde_json::to_writer(&mut *w, &record)?;
            w.write_all(b"\n")?;
        }
    }
    write_frame(&mut stream, &Frame::Control(Control::Done))?;
    Ok(acc.finish(config))
}

/// Connects to a serving verifier and answers with the requested prover
/// until the session completes.
pub fn connect_prover(addr: &str, kind: &ProverKind) -> Result<()> {
    if matches!(kind, ProverKind::Device(_)) {
        return Err(Error::Validation(
            "device provers are Phase-B-only; use `qkit analyze`".into(),
        ));
    }
    let mut stream = TcpStream::connect(addr)?;
    stream.set_nodelay(true).ok();
    stream.set_read_timeout(Some(DEFAULT_TIMEOUT))?;
    stream.set_write_timeout(Some(DEFAULT_TIMEOUT))?;

    let (protocol, seed) = match read_frame(&mut stream, Party::Verifier)? {
        Frame::Control(Control::Hello { protocol, seed, .. }) => (protocol, seed),
        _ => return Err(Error::violation(Party::Verifier, "expected hello")),
    };
    write_frame(&mut stream, &Frame::Control(Control::HelloAck { protocol }))?;

    let mut prover: Option<Box<dyn Prover>> = None;
    let mut rng = party_rng(seed, 0, Party::Prover);
    loop {
        match read_frame(&mut stream, Party::Verifier)? {
            Frame::Control(Control::Trial { index }) => {
                prover = Some(make_prover(protocol, kind));
                rng = party_rng(seed, index, Party::Prover);
            }
            Frame::Control(Control::Done) => return Ok(()),
            Frame::Control(_) => {
                return Err(Error::violation(Party::Verifier, "unexpected control frame"))
            }
            Frame::Protocol(Message::Verdict { .. }) => {}
            Frame::Protocol(msg) => {
                let active = prover
                    .as_deref_mut()
                    .ok_or_else(|| Error::violation(Party::Verifier, "message before trial"))?;
                let reply = active.respond(&msg, &mut rng)?;
                write_frame(&mut stream, &Frame::Protocol(reply))?;
            }
        }
    }
}
