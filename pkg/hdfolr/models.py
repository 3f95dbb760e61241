# nothing here, just an empty file to avoid Django complaints
