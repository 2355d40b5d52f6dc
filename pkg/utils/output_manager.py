import os
import asyncio
import logging

import aiofiles

from .errors import OutputError


class OutputManager:
    """Owns the output folder and serializes every file written into it"""
    def __init__(self, folder: str):
        self.folder = folder
        self.written = []  # paths in write order
        self._lock = asyncio.Lock()

    def path_for(self, filename: str) -> str:
        return os.path.join(self.folder, filename)

    async def ensure_output_folder(self):
        """Ensure output folder exists and is writable"""
        if not os.path.exists(self.folder):
            try:
                os.makedirs(self.folder)
                logging.info(f"Created output folder: {self.folder}")
            except OSError as e:
                logging.error(f"Error creating output folder: {e}")
                raise OutputError(f"Cannot create output folder {self.folder}: {e}", self.folder) from e

        if not os.path.isdir(self.folder):
            raise OutputError(f"Output path {self.folder} is not a folder", self.folder)

        # Test if folder is writable
        test_file = self.path_for('.write_test')
        try:
            async with aiofiles.open(test_file, 'w') as f:
                await f.write('test')
            os.remove(test_file)
        except OSError as e:
            logging.error(f"Output folder is not writable: {e}")
            raise OutputError(f"Output folder {self.folder} is not writable: {e}", self.folder) from e

    async def write_text(self, filename: str, text: str) -> str:
        """Write one file; writes never interleave"""
        path = self.path_for(filename)
        async with self._lock:
            try:
                async with aiofiles.open(path, 'w', encoding='utf-8', newline='\n') as f:
                    await f.write(text)
            except OSError as e:
                logging.error(f"Error writing {path}: {e}")
                raise OutputError(f"Cannot write {path}: {e}", path) from e
            self.written.append(path)
        logging.info(f"Wrote {path}")
        return path
