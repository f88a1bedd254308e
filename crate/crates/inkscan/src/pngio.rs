//! Minimal PNG encoding: 8-bit grayscale and RGB, stored (uncompressed)
//! deflate blocks.
//!
//! Artifacts here are small and consumed by tests and viewers, not shipped at
//! scale, so zero compression is an acceptable trade for having no codec
//! dependency and byte-stable output. Tests decode with an independent PNG
//! library to keep this encoder honest.

const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', 0x0D, 0x0A, 0x1A, 0x0A];

const fn build_crc_table() -> [u32; 256] {
    let mut table = [0u32; 256];
    let mut n = 0;
    while n < 256 {
        let mut c = n as u32;
        let mut k = 0;
        while k < 8 {
            c = if c & 1 != 0 { 0xEDB8_8320 ^ (c >> 1) } else { c >> 1 };
            k += 1;
        }
        table[n] = c;
        n += 1;
    }
    table
}

static CRC_TABLE: [u32; 256] = build_crc_table();

fn crc32(parts: &[&[u8]]) -> u32 {
    let mut c = 0xFFFF_FFFFu32;
    for part in parts {
        for &byte in *part {
            c = CRC_TABLE[((c ^ byte as u32) & 0xFF) as usize] ^ (c >> 8);
        }
    }
    c ^ 0xFFFF_FFFF
}

fn adler32(data: &[u8]) -> u32 {
    const MOD: u32 = 65_521;
    let mut a: u32 = 1;
    let mut b: u32 = 0;
    for chunk in data.chunks(5552) {
        // 5552 is the largest run that cannot overflow u32 between reductions
        for &byte in chunk {
            a += byte as u32;
            b += a;
        }
        a %= MOD;
        b %= MOD;
    }
    (b << 16) | a
}

fn push_chunk(out: &mut Vec<u8>, chunk_type: &[u8; 4], data: &[u8]) {
    out.extend_from_slice(&(data.len() as u32).to_be_bytes());
    out.extend_from_slice(chunk_type);
    out.extend_from_slice(data);
    out.extend_from_slice(&crc32(&[chunk_type, data]).to_be_bytes());
}

/// zlib stream holding `data` in stored (BTYPE=00) deflate blocks.
fn zlib_stored(data: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(data.len() + data.len() / 65_535 * 5 + 16);
    out.push(0x78); // 32K window, deflate
    out.push(0x01); // no preset dictionary, fastest-compression hint
    let mut blocks = data.chunks(65_535).peekable();
    loop {
        let block = blocks.next().unwrap_or(&[]);
        let is_last = blocks.peek().is_none();
        out.push(if is_last { 1 } else { 0 });
        let len = block.len() as u16;
        out.extend_from_slice(&len.to_le_bytes());
        out.extend_from_slice(&(!len).to_le_bytes());
        out.extend_from_slice(block);
        if is_last {
            break;
        }
    }
    out.extend_from_slice(&adler32(data).to_be_bytes());
    out
}

fn encode(rows: usize, cols: usize, color_type: u8, bytes_per_pixel: usize, pixels: &[u8]) -> Vec<u8> {
    assert!(rows > 0 && cols > 0, "image must be non-empty");
    assert_eq!(
        pixels.len(),
        rows * cols * bytes_per_pixel,
        "pixel buffer does not match {rows} x {cols}"
    );
    assert!(
        rows <= u32::MAX as usize && cols <= u32::MAX as usize,
        "image dimensions exceed PNG limits"
    );

    let mut ihdr = Vec::with_capacity(13);
    ihdr.extend_from_slice(&(cols as u32).to_be_bytes());
    ihdr.extend_from_slice(&(rows as u32).to_be_bytes());
    ihdr.push(8); // bit depth
    ihdr.push(color_type);
    ihdr.push(0); // compression
    ihdr.push(0); // filter method
    ihdr.push(0); // no interlace

    // every scanline gets filter type 0 (None)
    let stride = cols * bytes_per_pixel;
    let mut raster = Vec::with_capacity(rows * (1 + stride));
    for r in 0..rows {
        raster.push(0);
        raster.extend_from_slice(&pixels[r * stride..(r + 1) * stride]);
    }

    let mut png = Vec::new();
    png.extend_from_slice(&PNG_SIGNATURE);
    push_chunk(&mut png, b"IHDR", &ihdr);
    push_chunk(&mut png, b"IDAT", &zlib_stored(&raster));
    push_chunk(&mut png, b"IEND", &[]);
    png
}

/// Encodes a row-major 8-bit grayscale image (one byte per pixel).
pub fn encode_gray8(rows: usize, cols: usize, pixels: &[u8]) -> Vec<u8> {
    encode(rows, cols, 0, 1, pixels)
}

/// Encodes a row-major 8-bit RGB image (three bytes per pixel, no alpha).
pub fn encode_rgb8(rows: usize, cols: usize, pixels: &[u8]) -> Vec<u8> {
    encode(rows, cols, 2, 3, pixels)
}
