use std::net::IpAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use gloam_core::midi::parse_midi;
use gloam_core::params::EngineKind;
use gloam_core::preset::{factory_document, factory_names, factory_preset, load_preset, Preset, PresetWarning};
use gloam_core::render::{render_wav, RenderOptions};
use gloam_server::driver::{Pacing, DEFAULT_BUFFER_FRAMES};
use gloam_server::ServeConfig;

#[derive(Parser)]
#[command(name = "gloam", version, about = "Noise-drone and supersaw synthesizers: offline renderer and live server")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render a preset to a 32-bit float stereo WAV file.
    Render {
        /// Preset file, or the name of a factory preset.
        #[arg(long)]
        preset: String,
        /// Standard MIDI file with the notes to play.
        #[arg(long)]
        midi: Option<PathBuf>,
        /// Seconds to render. Defaults to the last MIDI event plus a release tail.
        #[arg(long)]
        duration: Option<f64>,
        /// Overrides the preset's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Sample rate: 44100, 48000 or 96000.
        #[arg(long, default_value_t = 48_000)]
        sr: u32,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// List or print the factory presets.
    Presets {
        #[command(subcommand)]
        action: PresetsAction,
    },
    /// Run the live engine with the websocket control protocol.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
        /// Engine to start with when no preset is given.
        #[arg(long, default_value = "shadows")]
        engine: EngineKind,
        /// Preset file, or the name of a factory preset.
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Render on a timer and discard the audio instead of using a sound card.
        #[arg(long)]
        null_audio: bool,
        #[arg(long, default_value_t = DEFAULT_BUFFER_FRAMES)]
        buffer_frames: usize,
        #[arg(long, default_value_t = 48_000)]
        sr: u32,
        /// Directory of static files (the control surface) served over HTTP.
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PresetsAction {
    List,
    /// Print a factory preset document.
    Dump { name: String },
}

fn resolve_preset(spec: &str) -> Result<Preset> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let (preset, warnings) = load_preset(&text).with_context(|| format!("loading {}", path.display()))?;
        for w in warnings {
            let PresetWarning::Clamped { id, given, used } = w;
            eprintln!("warning: {id} = {given} is out of range, using {used}");
        }
        return Ok(preset);
    }
    match factory_preset(spec) {
        Ok(p) => Ok(p),
        Err(_) => bail!(
            "no preset file or factory preset named {spec:?} (factory presets: {})",
            factory_names().collect::<Vec<_>>().join(", ")
        ),
    }
}

fn render(
    preset: &str,
    midi: Option<&Path>,
    duration: Option<f64>,
    seed: Option<u64>,
    sr: u32,
    output: &Path,
) -> Result<()> {
    let preset = resolve_preset(preset)?;
    let notes = match midi {
        Some(path) => {
            let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
            parse_midi(&bytes)
                .with_context(|| format!("parsing {}", path.display()))?
                .notes
        }
        None => Vec::new(),
    };
    let opts = RenderOptions {
        sample_rate: sr,
        duration,
        seed,
    };
    let wav = render_wav(&preset, &notes, &opts)?;
    std::fs::write(output, wav).with_context(|| format!("writing {}", output.display()))?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Render {
            preset,
            midi,
            duration,
            seed,
            sr,
            output,
        } => render(&preset, midi.as_deref(), duration, seed, sr, &output),
        Command::Presets { action } => {
            match action {
                PresetsAction::List => {
                    for name in factory_names() {
                        let p = factory_preset(name)?;
                        println!("{name}\t{}", p.engine);
                    }
                }
                PresetsAction::Dump { name } => match factory_document(&name) {
                    Some(doc) => print!("{doc}"),
                    None => bail!("no factory preset named {name:?}"),
                },
            }
            Ok(())
        }
        Command::Serve {
            port,
            bind,
            engine,
            preset,
            seed,
            null_audio,
            buffer_frames,
            sr,
            static_dir,
        } => {
            let preset = preset.as_deref().map(resolve_preset).transpose()?;
            let config = ServeConfig {
                bind,
                port,
                engine,
                preset,
                seed,
                null_audio,
                buffer_frames,
                sample_rate: f64::from(sr),
                pacing: Pacing::RealTime,
                static_dir,
            };
            let runtime = tokio::runtime::Runtime::new()?;
            runtime.block_on(gloam_server::serve(config))?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
