"""comicgen: sampled video frames + SRT subtitles -> multi-page comic books."""

__version__ = "0.1.0"
