#pragma once

namespace seenet {

// Keeps large freed blocks in the heap instead of returning them to the OS.
// Training allocates and frees the same large buffers every image; without
// this each pass pays for fresh zeroed pages. No-op outside glibc.
void retain_heap_memory();

}  // namespace seenet
